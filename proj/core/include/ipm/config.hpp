#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ipm/fhn_est.hpp"
#include "ipm/mom_est.hpp"
#include "ipm/model.hpp"

namespace ipm {

enum class ExperimentKind {
    sensitivity,
    rate_T,
    rate_N,
    comparison,
    bistable_drift,
    bistable_interaction,
    multiplicative,
    fhn,
    custom,
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

/// One swept variable: "M", "T", "N", "delta", or empty for a single point.
struct Sweep {
    std::string variable;
    std::vector<double> values;

    bool empty() const noexcept { return variable.empty(); }
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::custom;
    std::optional<ModelSpec> model;  // one-dimensional experiments
    FhnModel fhn{};                  // ExperimentKind::fhn
    SimConfig sim{};
    int M = 2;
    double delta = 0.005;
    std::vector<std::uint64_t> seeds{1};
    Sweep sweep{};
    std::filesystem::path output_dir = "out";
    bool first_particle_only = false;

    bool two_dimensional() const noexcept { return experiment == ExperimentKind::fhn; }
    /// Throws std::invalid_argument describing the first problem found.
    void validate() const;
};

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& file);
std::string config_to_json(const ExperimentConfig& cfg);

/// Accepts either a bare model object or a document with a "model" key.
ModelSpec parse_model(std::string_view json_text);
std::string model_to_json(const ModelSpec& spec);

/// Reads the "fhn" block of a document (defaults when absent).
FhnModel parse_fhn_model(std::string_view json_text);

/// Built-in models used by the presets.
ModelSpec cubic_model();                 // f = alpha_3 x^3, g = -x, h = sigma_0
ModelSpec ou_known_diffusion_model();    // OU with sigma_0 = 1 known
ModelSpec bistable_drift_model();        // f = alpha (x^3 - x), g = gamma x
ModelSpec bistable_interaction_model();  // f = alpha x, g = gamma (x^3 - x)
ModelSpec multiplicative_model();        // f = -x, g = -x, h = sigma_0 + sigma_2 x^2

/// Default configuration for each experiment. Desk scale uses N = 100 and
/// T = 2048; paper scale N = 250 and T = 1e4.
ExperimentConfig preset(ExperimentKind kind, bool paper_scale = false);

/// {theta_hat, residual, cond, rank_ok, M, P, col_labels, warnings}
std::string estimate_to_json(const Estimate& est, int indent = 2);

}  // namespace ipm
