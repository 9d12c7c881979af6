#include "ipm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "ipm/baselines.hpp"
#include "ipm/fhn_est.hpp"
#include "ipm/obs.hpp"
#include "ipm/sim.hpp"

namespace ipm {

using nlohmann::json;

namespace {

constexpr const char* kRunsCsv = "runs.csv";
constexpr const char* kSummaryJson = "summary.json";

struct Evaluation {
    double sweep_value;
    int M;
};

// Particles observed at one sampling stride, with the estimations that
// share those observables.
struct ObservationGroup {
    double delta;
    std::size_t stride;
    int r_max;
    std::vector<Evaluation> evals;
};

struct Task {
    SimConfig sim;
    std::vector<ObservationGroup> groups;
};

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::domain_error("summarize: cannot parse number '" + std::string(s) + "'");
    }
    return v;
}

std::vector<double> true_theta(const ExperimentConfig& cfg) {
    if (cfg.two_dimensional()) {
        const std::array<double, 3> v{cfg.fhn.values.gamma, cfg.fhn.values.sigma, cfg.fhn.values.a};
        std::vector<double> out;
        for (std::size_t i = 0; i < 3; ++i) {
            if (cfg.fhn.unknown[i]) out.push_back(v[i]);
        }
        return out;
    }
    const Eigen::VectorXd t = pack_theta(*cfg.model);
    return {t.data(), t.data() + t.size()};
}

std::vector<std::string> labels_for(const ExperimentConfig& cfg) {
    if (cfg.two_dimensional()) {
        static const std::array<const char*, 3> names{"gamma", "sigma", "a"};
        std::vector<std::string> out;
        for (std::size_t i = 0; i < 3; ++i) {
            if (cfg.fhn.unknown[i]) out.emplace_back(names[i]);
        }
        return out;
    }
    return cfg.model->column_labels();
}

int moment_order(const ExperimentConfig& cfg, int M) {
    return cfg.two_dimensional() ? kFhnMomentP : required_moment_order(*cfg.model, M);
}

ObservationGroup make_group(const ExperimentConfig& cfg, double delta, std::vector<Evaluation> evals) {
    int r_max = 0;
    for (const auto& e : evals) r_max = std::max(r_max, moment_order(cfg, e.M));
    return {delta, stride_for(cfg.sim.h, delta), r_max, std::move(evals)};
}

std::vector<Task> build_tasks(const ExperimentConfig& cfg) {
    std::vector<Task> tasks;
    const auto& var = cfg.sweep.variable;
    if (var == "T" || var == "N") {
        for (double v : cfg.sweep.values) {
            for (auto seed : cfg.seeds) {
                Task t;
                t.sim = cfg.sim;
                t.sim.seed = seed;
                if (var == "T") t.sim.T = v;
                else t.sim.N = static_cast<std::size_t>(v);
                t.groups.push_back(make_group(cfg, cfg.delta, {{v, cfg.M}}));
                tasks.push_back(std::move(t));
            }
        }
        return tasks;
    }
    for (auto seed : cfg.seeds) {
        Task t;
        t.sim = cfg.sim;
        t.sim.seed = seed;
        if (var == "M") {
            std::vector<Evaluation> evals;
            for (double v : cfg.sweep.values) evals.push_back({v, static_cast<int>(v)});
            t.groups.push_back(make_group(cfg, cfg.delta, std::move(evals)));
        } else if (var == "delta") {
            for (double v : cfg.sweep.values) t.groups.push_back(make_group(cfg, v, {{v, cfg.M}}));
        } else {
            t.groups.push_back(make_group(cfg, cfg.delta, {{0.0, cfg.M}}));
        }
        tasks.push_back(std::move(t));
    }
    return tasks;
}

double error_norm(const std::vector<double>& theta, const std::vector<double>& truth) {
    double s = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) s += (theta[i] - truth[i]) * (theta[i] - truth[i]);
    return std::sqrt(s);
}

RunRecord make_record(double sweep_value, std::uint64_t seed, std::size_t particle, std::string estimator,
                      const Estimate& est, const std::vector<double>& truth) {
    RunRecord r;
    r.sweep_value = sweep_value;
    r.seed = seed;
    r.particle = particle;
    r.estimator = std::move(estimator);
    r.status = "ok";
    r.theta.assign(est.theta_hat.data(), est.theta_hat.data() + est.theta_hat.size());
    r.err_norm = error_norm(r.theta, truth);
    r.cond = est.cond;
    r.rank_ok = est.rank_ok;
    return r;
}

RunRecord failed_record(double sweep_value, std::uint64_t seed, std::size_t particle, std::string estimator,
                        std::string status, std::size_t P) {
    RunRecord r;
    r.sweep_value = sweep_value;
    r.seed = seed;
    r.particle = particle;
    r.estimator = std::move(estimator);
    r.status = std::move(status);
    r.theta.assign(P, std::numeric_limits<double>::quiet_NaN());
    r.err_norm = std::numeric_limits<double>::quiet_NaN();
    r.cond = std::numeric_limits<double>::quiet_NaN();
    r.rank_ok = false;
    return r;
}

RunRecord scalar_record(double sweep_value, std::uint64_t seed, std::size_t particle, std::string estimator,
                        double value, const std::vector<double>& truth) {
    RunRecord r;
    r.sweep_value = sweep_value;
    r.seed = seed;
    r.particle = particle;
    r.estimator = std::move(estimator);
    r.status = "ok";
    r.theta = {value};
    r.err_norm = error_norm(r.theta, truth);
    r.cond = 1.0;
    r.rank_ok = true;
    return r;
}

std::vector<RunRecord> run_task_1d(const ExperimentConfig& cfg, const Task& task, const std::vector<double>& truth) {
    const ModelSpec& model = *cfg.model;
    const std::size_t observed = cfg.first_particle_only ? 1 : task.sim.N;
    std::vector<std::vector<PathAccumulator>> acc(task.groups.size());
    for (std::size_t g = 0; g < task.groups.size(); ++g) {
        acc[g].assign(observed, PathAccumulator(task.groups[g].r_max, task.groups[g].stride));
    }
    std::vector<RunRecord> out;
    try {
        run_ips(model, task.sim, [&](std::size_t, std::span<const double> x, std::span<const double>) {
            for (auto& group : acc) {
                for (std::size_t n = 0; n < observed; ++n) group[n].push(x[n]);
            }
        });
    } catch (const SimulationError&) {
        for (const auto& group : task.groups) {
            for (const auto& e : group.evals) {
                out.push_back(failed_record(e.sweep_value, task.sim.seed, 0, "moments", "blowup", truth.size()));
            }
        }
        return out;
    }

    const bool baselines = cfg.experiment == ExperimentKind::comparison;
    for (std::size_t g = 0; g < task.groups.size(); ++g) {
        const auto& group = task.groups[g];
        for (const auto& e : group.evals) {
            for (std::size_t n = 0; n < observed; ++n) {
                const auto& a = acc[g][n];
                try {
                    const MomentSystem sys =
                        assemble_system(e.M, model, a.moments(), a.quadratic_variation_rate(task.sim.h));
                    out.push_back(make_record(e.sweep_value, task.sim.seed, n, "moments", solve(sys), truth));
                } catch (const std::domain_error&) {
                    out.push_back(failed_record(e.sweep_value, task.sim.seed, n, "moments", "failed", truth.size()));
                }
                if (!baselines) continue;
                try {
                    out.push_back(scalar_record(e.sweep_value, task.sim.seed, n, "mle", mle_ou(a.ou(), group.delta), truth));
                } catch (const std::domain_error&) {
                    out.push_back(failed_record(e.sweep_value, task.sim.seed, n, "mle", "failed", 1));
                }
                try {
                    out.push_back(
                        scalar_record(e.sweep_value, task.sim.seed, n, "eigen", eigenfn_ou(a.ou(), group.delta), truth));
                } catch (const std::domain_error&) {
                    out.push_back(failed_record(e.sweep_value, task.sim.seed, n, "eigen", "failed", 1));
                }
            }
        }
    }
    return out;
}

std::vector<RunRecord> run_task_fhn(const ExperimentConfig& cfg, const Task& task, const std::vector<double>& truth) {
    const std::size_t observed = cfg.first_particle_only ? 1 : task.sim.N;
    std::vector<std::vector<PathAccumulator2D>> acc(task.groups.size());
    for (std::size_t g = 0; g < task.groups.size(); ++g) {
        acc[g].assign(observed, PathAccumulator2D(kFhnMomentP, kFhnMomentQ, task.groups[g].stride));
    }
    std::vector<RunRecord> out;
    try {
        run_fhn(cfg.fhn.values, task.sim, [&](std::size_t, std::span<const double> x, std::span<const double> y) {
            for (auto& group : acc) {
                for (std::size_t n = 0; n < observed; ++n) group[n].push(x[n], y[n]);
            }
        });
    } catch (const SimulationError&) {
        for (const auto& group : task.groups) {
            for (const auto& e : group.evals) {
                out.push_back(failed_record(e.sweep_value, task.sim.seed, 0, "moments", "blowup", truth.size()));
            }
        }
        return out;
    }
    for (std::size_t g = 0; g < task.groups.size(); ++g) {
        for (const auto& e : task.groups[g].evals) {
            for (std::size_t n = 0; n < observed; ++n) {
                const auto& a = acc[g][n];
                try {
                    const Estimate est = estimate_fhn(a.moments(), a.quadratic_variation_rate(task.sim.h), cfg.fhn);
                    out.push_back(make_record(e.sweep_value, task.sim.seed, n, "moments", est, truth));
                } catch (const std::domain_error&) {
                    out.push_back(failed_record(e.sweep_value, task.sim.seed, n, "moments", "failed", truth.size()));
                }
            }
        }
    }
    return out;
}

void write_csv(const std::filesystem::path& file, const std::string& experiment, const std::string& sweep_var,
               const std::vector<std::string>& labels, const std::vector<RunRecord>& records) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("cannot open " + file.string() + " for writing");
    os << "experiment,sweep_var,sweep_value,seed,particle,estimator,status";
    for (const auto& l : labels) os << ",theta_" << l;
    os << ",err_norm,cond,rank_ok\n";
    const std::string var = sweep_var.empty() ? "none" : sweep_var;
    for (const auto& r : records) {
        os << experiment << ',' << var << ',' << format_double(r.sweep_value) << ',' << r.seed << ',' << r.particle
           << ',' << r.estimator << ',' << r.status;
        for (double t : r.theta) os << ',' << format_double(t);
        os << ',' << format_double(r.err_norm) << ',' << format_double(r.cond) << ',' << (r.rank_ok ? 1 : 0)
           << '\n';
    }
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double mean_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double stddev_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

const PointSummary* Summary::find(const std::string& estimator, double sweep_value) const {
    for (const auto& p : points) {
        if (p.estimator == estimator && p.sweep_value == sweep_value) return &p;
    }
    return nullptr;
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) return std::nullopt;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i])) return std::nullopt;
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    const double mx = mean_of(lx), my = mean_of(ly);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx == 0.0) return std::nullopt;
    return sxy / sxx;
}

Summary summarize_records(const std::string& experiment, const std::string& sweep_var,
                          const std::vector<std::string>& col_labels, const std::vector<RunRecord>& records) {
    Summary s;
    s.experiment = experiment;
    s.sweep_var = sweep_var;
    s.col_labels = col_labels;

    std::map<std::pair<std::string, double>, std::vector<const RunRecord*>> groups;
    std::vector<std::string> estimators;
    for (const auto& r : records) {
        if (r.status == "blowup") {
            ++s.blowups;
            continue;
        }
        if (r.status != "ok") continue;
        if (std::find(estimators.begin(), estimators.end(), r.estimator) == estimators.end()) {
            estimators.push_back(r.estimator);
        }
        groups[{r.estimator, r.sweep_value}].push_back(&r);
    }

    for (const auto& est : estimators) {
        std::vector<double> xs, ys;
        for (const auto& [key, recs] : groups) {
            if (key.first != est) continue;
            PointSummary p;
            p.estimator = est;
            p.sweep_value = key.second;
            p.count = recs.size();
            const std::size_t P = recs.front()->theta.size();
            for (std::size_t c = 0; c < P; ++c) {
                std::vector<double> v;
                for (const auto* r : recs) v.push_back(r->theta[c]);
                p.mean_theta.push_back(mean_of(v));
                p.median_theta.push_back(median_of(v));
                p.std_theta.push_back(stddev_of(v));
            }
            std::vector<double> errs, conds;
            std::map<std::uint64_t, std::vector<double>> by_seed;
            for (const auto* r : recs) {
                errs.push_back(r->err_norm);
                by_seed[r->seed].push_back(r->err_norm);
                if (std::isfinite(r->cond)) conds.push_back(r->cond);
                if (!r->rank_ok) ++p.rank_deficient;
            }
            p.mean_err = mean_of(errs);
            p.median_err = median_of(errs);
            p.std_err = stddev_of(errs);
            std::vector<double> seed_means;
            for (const auto& [seed, e] : by_seed) seed_means.push_back(mean_of(e));
            p.std_err_over_seeds = stddev_of(seed_means);
            p.mean_cond = conds.empty() ? std::numeric_limits<double>::infinity() : mean_of(conds);
            xs.push_back(p.sweep_value);
            ys.push_back(p.mean_err);
            s.points.push_back(std::move(p));
        }
        const bool rate = sweep_var == "T" || sweep_var == "N";
        s.slopes.push_back({est, rate ? loglog_slope(xs, ys) : std::nullopt});
    }
    return s;
}

std::string summary_to_json(const Summary& s) {
    json j;
    j["experiment"] = s.experiment;
    j["sweep_var"] = s.sweep_var.empty() ? "none" : s.sweep_var;
    j["col_labels"] = s.col_labels;
    j["blowups"] = s.blowups;
    json points = json::array();
    for (const auto& p : s.points) {
        json thetas = json::array();
        points.push_back({{"estimator", p.estimator},
                          {"sweep_value", p.sweep_value},
                          {"count", p.count},
                          {"mean_theta", p.mean_theta},
                          {"median_theta", p.median_theta},
                          {"std_theta", p.std_theta},
                          {"mean_err", p.mean_err},
                          {"median_err", p.median_err},
                          {"std_err", p.std_err},
                          {"std_err_over_seeds", p.std_err_over_seeds},
                          {"mean_cond", number_or_null(p.mean_cond)},
                          {"rank_deficient", p.rank_deficient}});
    }
    j["points"] = points;
    json slopes = json::object();
    for (const auto& f : s.slopes) slopes[f.estimator] = f.slope ? json(*f.slope) : json(nullptr);
    j["slopes"] = slopes;
    return j.dump(2);
}

RunResult run_experiment(const ExperimentConfig& cfg, bool write_files) {
    cfg.validate();
    RunResult result;
    result.col_labels = labels_for(cfg);
    result.theta_true = true_theta(cfg);

    const std::vector<Task> tasks = build_tasks(cfg);
    std::vector<std::vector<RunRecord>> per_task(tasks.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                per_task[i] = cfg.two_dimensional() ? run_task_fhn(cfg, tasks[i], result.theta_true)
                                                    : run_task_1d(cfg, tasks[i], result.theta_true);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(tasks.size(), 1));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    for (auto& recs : per_task) {
        std::move(recs.begin(), recs.end(), std::back_inserter(result.records));
    }
    const std::string experiment(to_string(cfg.experiment));
    result.summary = summarize_records(experiment, cfg.sweep.variable, result.col_labels, result.records);

    if (write_files) {
        std::filesystem::create_directories(cfg.output_dir);
        result.csv_path = cfg.output_dir / kRunsCsv;
        result.summary_path = cfg.output_dir / kSummaryJson;
        write_csv(result.csv_path, experiment, cfg.sweep.variable, result.col_labels, result.records);
        std::ofstream os(result.summary_path);
        os << summary_to_json(result.summary) << '\n';
        std::ofstream cfg_os(cfg.output_dir / "config.json");
        cfg_os << config_to_json(cfg) << '\n';
    }
    return result;
}

Summary summarize(const std::filesystem::path& run_dir) {
    if (!std::filesystem::is_directory(run_dir)) {
        throw std::domain_error("summarize: " + run_dir.string() + " is not a directory");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(run_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    if (files.empty()) throw std::domain_error("summarize: no run CSV in " + run_dir.string());
    std::sort(files.begin(), files.end());

    std::string experiment, sweep_var;
    std::vector<std::string> labels;
    std::vector<RunRecord> records;
    for (const auto& file : files) {
        std::ifstream is(file);
        std::string line;
        if (!std::getline(is, line)) continue;
        const auto header = split(line);
        if (header.size() < 10 || header[0] != "experiment") continue;
        std::vector<std::string> file_labels;
        for (std::size_t c = 7; c + 3 < header.size(); ++c) file_labels.push_back(header[c].substr(6));
        if (labels.empty()) labels = file_labels;
        if (file_labels != labels) throw std::domain_error("summarize: run CSVs have different columns");
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            const auto cells = split(line);
            if (cells.size() != header.size()) throw std::domain_error("summarize: malformed row in " + file.string());
            experiment = cells[0];
            sweep_var = cells[1] == "none" ? "" : cells[1];
            RunRecord r;
            r.sweep_value = parse_double(cells[2]);
            r.seed = std::stoull(cells[3]);
            r.particle = std::stoull(cells[4]);
            r.estimator = cells[5];
            r.status = cells[6];
            for (std::size_t c = 0; c < labels.size(); ++c) r.theta.push_back(parse_double(cells[7 + c]));
            r.err_norm = parse_double(cells[7 + labels.size()]);
            r.cond = parse_double(cells[8 + labels.size()]);
            r.rank_ok = cells[9 + labels.size()] == "1";
            records.push_back(std::move(r));
        }
    }
    if (records.empty()) throw std::domain_error("summarize: no run records in " + run_dir.string());
    Summary s = summarize_records(experiment, sweep_var, labels, records);
    std::ofstream os(run_dir / kSummaryJson);
    os << summary_to_json(s) << '\n';
    return s;
}

}  // namespace ipm
