// ipmoments: simulate interacting particle systems and estimate their
// polynomial coefficients by the method of moments.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ipm/config.hpp"
#include "ipm/experiment.hpp"
#include "ipm/fhn_est.hpp"
#include "ipm/mom_est.hpp"
#include "ipm/obs.hpp"
#include "ipm/sim.hpp"
#include "ipm/trajectory_io.hpp"

namespace {

std::string slurp(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw std::invalid_argument("cannot open " + file.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int cmd_run(const std::string& config_file) {
    const ipm::ExperimentConfig cfg = ipm::load_config(config_file);
    const ipm::RunResult result = ipm::run_experiment(cfg);
    std::cout << "wrote " << result.csv_path.string() << " (" << result.records.size() << " rows)\n"
              << "wrote " << result.summary_path.string() << '\n';
    if (result.summary.blowups > 0) std::cout << result.summary.blowups << " simulation(s) blew up\n";
    return 0;
}

int cmd_summarize(const std::string& dir) {
    const ipm::Summary s = ipm::summarize(dir);
    std::cout << ipm::summary_to_json(s) << '\n';
    return 0;
}

int cmd_simulate(const std::string& config_file, const std::string& out, const std::string& csv) {
    const ipm::ExperimentConfig cfg = ipm::load_config(config_file);
    const ipm::Trajectory traj = cfg.two_dimensional()
        ? ipm::simulate_fhn(cfg.fhn.values.gamma, cfg.fhn.values.sigma, cfg.fhn.values.a, cfg.sim)
        : ipm::simulate_ips(*cfg.model, cfg.sim);
    ipm::write_trajectory(out, traj);
    if (!csv.empty()) ipm::write_trajectory_csv(csv, traj);
    std::cout << "wrote " << out << " (N=" << traj.N << ", steps=" << traj.steps << ", h=" << traj.h << ")\n";
    return 0;
}

int cmd_estimate(const std::string& traj_file, const std::string& model_file, int M, double delta,
                 std::size_t particle) {
    const ipm::Trajectory traj = ipm::read_trajectory(traj_file);
    if (particle >= traj.N) throw std::invalid_argument("particle index out of range");
    const std::string text = slurp(model_file);
    ipm::Estimate est;
    if (traj.dims == 2) {
        est = ipm::estimate_fhn(traj, particle, delta, ipm::parse_fhn_model(text));
    } else {
        const ipm::ModelSpec model = ipm::parse_model(text);
        const auto path = traj.path(0, particle);
        const int r_max = ipm::required_moment_order(model, M);
        const ipm::MomentSet mu = ipm::empirical_moments_subsampled(path, traj.h, r_max, delta);
        const double qv = ipm::quadratic_variation_rate(path, traj.h, delta);
        est = ipm::solve(ipm::assemble_system(M, model, mu, qv));
    }
    std::cout << ipm::estimate_to_json(est) << '\n';
    return 0;
}

int cmd_preset(const std::string& name, bool paper_scale) {
    std::cout << ipm::config_to_json(ipm::preset(ipm::parse_experiment_kind(name), paper_scale)) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Method-of-moments inference for interacting particle systems"};
    app.require_subcommand(1);

    std::string config_file, dir, out, csv, traj_file, model_file, experiment;
    int M = 2;
    double delta = 0.005;
    std::size_t particle = 0;
    bool paper_scale = false;

    auto* run = app.add_subcommand("run", "Run an experiment and write runs.csv and summary.json");
    run->add_option("--config", config_file, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);

    auto* summarize = app.add_subcommand("summarize", "Aggregate the run CSVs in a directory");
    summarize->add_option("--dir", dir, "Run directory")->required();

    auto* simulate = app.add_subcommand("simulate", "Simulate the configured system and save the trajectory");
    simulate->add_option("--config", config_file, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out", out, "Binary trajectory output")->required();
    simulate->add_option("--csv", csv, "Also write the trajectory as CSV");

    auto* estimate = app.add_subcommand("estimate", "Estimate coefficients from a saved trajectory");
    estimate->add_option("--traj", traj_file, "Binary trajectory file")->required()->check(CLI::ExistingFile);
    estimate->add_option("--model", model_file, "Model (JSON)")->required()->check(CLI::ExistingFile);
    estimate->add_option("--M", M, "Number of moment equations")->capture_default_str();
    estimate->add_option("--delta", delta, "Observation spacing")->capture_default_str();
    estimate->add_option("--particle", particle, "Observed particle")->capture_default_str();

    auto* preset = app.add_subcommand("preset", "Print the default config of an experiment");
    preset->add_option("--experiment", experiment, "Experiment name")->required();
    preset->add_flag("--paper-scale", paper_scale, "N = 250, T = 1e4 instead of desk scale");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config_file);
        if (*summarize) return cmd_summarize(dir);
        if (*simulate) return cmd_simulate(config_file, out, csv);
        if (*estimate) return cmd_estimate(traj_file, model_file, M, delta, particle);
        if (*preset) return cmd_preset(experiment, paper_scale);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
