#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ipm/config.hpp"

namespace ipm {

/// One estimate from one observed particle (or a failed simulation when
/// status == "blowup").
struct RunRecord {
    double sweep_value = 0.0;
    std::uint64_t seed = 0;
    std::size_t particle = 0;
    std::string estimator;  // "moments", "mle", "eigen"
    std::string status;     // "ok" or "blowup"
    std::vector<double> theta;
    double err_norm = 0.0;
    double cond = 0.0;
    bool rank_ok = true;
};

struct PointSummary {
    std::string estimator;
    double sweep_value = 0.0;
    std::size_t count = 0;
    std::vector<double> mean_theta, median_theta, std_theta;
    double mean_err = 0.0;
    double median_err = 0.0;
    double std_err = 0.0;           // over all records at this point
    double std_err_over_seeds = 0.0;  // of the per-seed mean errors
    double mean_cond = 0.0;
    std::size_t rank_deficient = 0;
};

struct SlopeFit {
    std::string estimator;
    std::optional<double> slope;  // log(mean error) against log(sweep value)
};

struct Summary {
    std::string experiment;
    std::string sweep_var;
    std::vector<std::string> col_labels;
    std::vector<PointSummary> points;
    std::vector<SlopeFit> slopes;
    std::size_t blowups = 0;

    const PointSummary* find(const std::string& estimator, double sweep_value) const;
};

struct RunResult {
    std::vector<std::string> col_labels;
    std::vector<double> theta_true;
    std::vector<RunRecord> records;
    Summary summary;
    std::filesystem::path csv_path;
    std::filesystem::path summary_path;
};

/// Simulates once per (sweep point, seed) as needed, estimates from every
/// observed particle and writes runs.csv and summary.json to
/// cfg.output_dir. Blow-ups are recorded and excluded from aggregates.
/// Set write_files = false to keep everything in memory.
RunResult run_experiment(const ExperimentConfig& cfg, bool write_files = true);

/// Aggregates in-memory records per (estimator, sweep value).
Summary summarize_records(const std::string& experiment, const std::string& sweep_var,
                          const std::vector<std::string>& col_labels, const std::vector<RunRecord>& records);

/// Reads run_dir/runs.csv, writes run_dir/summary.json and returns it.
/// Throws std::domain_error when no run CSV is present.
Summary summarize(const std::filesystem::path& run_dir);

std::string summary_to_json(const Summary& s);

/// Ordinary least squares slope of log(y) on log(x); empty when fewer than
/// two usable points or any y <= 0.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ipm
