#include "ipm/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ipm {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 9> kKindNames{{
    {ExperimentKind::sensitivity, "sensitivity"},
    {ExperimentKind::rate_T, "rate_T"},
    {ExperimentKind::rate_N, "rate_N"},
    {ExperimentKind::comparison, "comparison"},
    {ExperimentKind::bistable_drift, "bistable_drift"},
    {ExperimentKind::bistable_interaction, "bistable_interaction"},
    {ExperimentKind::multiplicative, "multiplicative"},
    {ExperimentKind::fhn, "fhn"},
    {ExperimentKind::custom, "custom"},
}};

constexpr std::array<const char*, 3> kFhnNames{"gamma", "sigma", "a"};

std::vector<double> read_doubles(const json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("model: missing '") + key + "'");
    return j.at(key).get<std::vector<double>>();
}

// Maps "alpha_3" style labels to upsilon indices.
std::size_t label_index(const std::map<std::string, std::size_t>& labels, const std::string& name) {
    auto it = labels.find(name);
    if (it == labels.end()) throw std::invalid_argument("model: unknown coefficient label '" + name + "'");
    return it->second;
}

ModelSpec model_from_json(const json& j) {
    auto alpha = read_doubles(j, "alpha");
    auto gamma = read_doubles(j, "gamma");
    auto sigma = read_doubles(j, "sigma");
    const std::size_t n = alpha.size() + gamma.size() + sigma.size();
    // Probe spec for label lookup.
    const ModelSpec probe = ModelSpec::from_blocks(alpha, gamma, sigma, std::vector<bool>(n, false));
    std::map<std::string, std::size_t> labels;
    for (std::size_t i = 0; i < n; ++i) labels[probe.coefficient_label(i)] = i;

    std::vector<bool> mask(n, false);
    if (j.contains("unknown")) {
        for (const auto& name : j.at("unknown").get<std::vector<std::string>>()) {
            mask[label_index(labels, name)] = true;
        }
    }
    std::vector<TiedUnknown> ties;
    if (j.contains("ties")) {
        for (const auto& t : j.at("ties")) {
            TiedUnknown tie;
            tie.label = t.at("label").get<std::string>();
            for (const auto& [name, w] : t.at("terms").items()) {
                const std::size_t idx = label_index(labels, name);
                tie.terms.emplace_back(idx, w.get<double>());
                mask[idx] = true;
            }
            std::sort(tie.terms.begin(), tie.terms.end());
            ties.push_back(std::move(tie));
        }
    }
    return ModelSpec::from_blocks(std::move(alpha), std::move(gamma), std::move(sigma), std::move(mask),
                                  std::move(ties));
}

json model_to_json_value(const ModelSpec& spec) {
    json j;
    j["alpha"] = std::vector<double>(spec.alpha().begin(), spec.alpha().end());
    j["gamma"] = std::vector<double>(spec.gamma().begin(), spec.gamma().end());
    j["sigma"] = std::vector<double>(spec.sigma().begin(), spec.sigma().end());
    std::vector<bool> tied(spec.size(), false);
    json ties = json::array();
    for (const auto& t : spec.ties()) {
        json terms = json::object();
        for (auto [idx, w] : t.terms) {
            terms[spec.coefficient_label(idx)] = w;
            tied[idx] = true;
        }
        ties.push_back({{"label", t.label}, {"terms", terms}});
    }
    std::vector<std::string> unknown;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        if (spec.is_unknown(i) && !tied[i]) unknown.push_back(spec.coefficient_label(i));
    }
    j["unknown"] = unknown;
    if (!ties.empty()) j["ties"] = ties;
    return j;
}

FhnModel fhn_from_json(const json& j) {
    FhnModel m;
    m.values.gamma = j.value("gamma", m.values.gamma);
    m.values.sigma = j.value("sigma", m.values.sigma);
    m.values.a = j.value("a", m.values.a);
    if (j.contains("unknown")) {
        m.unknown = {false, false, false};
        for (const auto& name : j.at("unknown").get<std::vector<std::string>>()) {
            auto it = std::find(kFhnNames.begin(), kFhnNames.end(), name);
            if (it == kFhnNames.end()) throw std::invalid_argument("fhn: unknown parameter '" + name + "'");
            m.unknown[static_cast<std::size_t>(it - kFhnNames.begin())] = true;
        }
    }
    return m;
}

json fhn_to_json(const FhnModel& m) {
    std::vector<std::string> unknown;
    for (std::size_t i = 0; i < 3; ++i) {
        if (m.unknown[i]) unknown.emplace_back(kFhnNames[i]);
    }
    return {{"gamma", m.values.gamma}, {"sigma", m.values.sigma}, {"a", m.values.a}, {"unknown", unknown}};
}

SimConfig sim_from_json(const json& j, SimConfig sim) {
    sim.N = j.value("N", sim.N);
    sim.T = j.value("T", sim.T);
    sim.h = j.value("h", sim.h);
    sim.seed = j.value("seed", sim.seed);
    if (j.contains("init")) {
        const auto& init = j.at("init");
        const std::string type = init.value("type", std::string("point"));
        if (type == "point") {
            sim.init = InitialCondition::point(init.value("x0", 0.0), init.value("y0", 0.0));
        } else if (type == "gaussian") {
            sim.init = InitialCondition::normal(init.value("mean", 0.0), init.value("var", 1.0),
                                                init.value("mean_y", 0.0));
        } else {
            throw std::invalid_argument("sim.init.type must be 'point' or 'gaussian'");
        }
    }
    return sim;
}

json sim_to_json(const SimConfig& sim) {
    json init;
    if (sim.init.kind == InitialCondition::Kind::point_mass) {
        init = {{"type", "point"}, {"x0", sim.init.x0}, {"y0", sim.init.y0}};
    } else {
        init = {{"type", "gaussian"}, {"mean", sim.init.x0}, {"var", sim.init.var}, {"mean_y", sim.init.y0}};
    }
    return {{"N", sim.N}, {"T", sim.T}, {"h", sim.h}, {"seed", sim.seed}, {"init", init}};
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
}

std::string read_file(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw std::runtime_error("cannot open " + file.string());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<double> powers_of_two(int lo, int hi, double scale = 1.0) {
    std::vector<double> v;
    for (int i = lo; i <= hi; ++i) v.push_back(scale * std::ldexp(1.0, i));
    return v;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
    for (auto [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    return "custom";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
    for (auto [k, n] : kKindNames) {
        if (n == name) return k;
    }
    throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

namespace {

void check_delta(double h, double delta) {
    try {
        stride_for(h, delta);
    } catch (const std::domain_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    sim.validate();
    if (seeds.empty()) throw std::invalid_argument("config: seeds must be non-empty");
    if (two_dimensional()) {
        if (std::none_of(fhn.unknown.begin(), fhn.unknown.end(), [](bool b) { return b; })) {
            throw std::invalid_argument("config: fhn model has no unknown parameters");
        }
    } else {
        if (!model) throw std::invalid_argument("config: missing model");
        if (model->P() == 0) throw std::invalid_argument("config: model has no unknown coefficients (P = 0)");
        if (experiment == ExperimentKind::comparison &&
            (model->P() != 1 || model->column_labels().front() != "alpha_1")) {
            throw std::invalid_argument("config: comparison requires alpha_1 as the only unknown");
        }
    }
    const auto check_M = [&](int m) {
        if (!two_dimensional() && m < static_cast<int>(model->P()) - 1) {
            throw std::invalid_argument("config: M=" + std::to_string(m) + " is below P-1");
        }
    };
    if (sweep.variable != "M") check_M(M);
    check_delta(sim.h, delta);

    if (sweep.empty()) return;
    if (sweep.values.empty()) throw std::invalid_argument("config: sweep has no values");
    for (double v : sweep.values) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("config: sweep values must be positive");
    }
    const auto& var = sweep.variable;
    if (var == "M") {
        if (two_dimensional()) throw std::invalid_argument("config: fhn does not sweep M");
        for (double v : sweep.values) {
            if (v != std::floor(v)) throw std::invalid_argument("config: M sweep values must be integers");
            check_M(static_cast<int>(v));
        }
    } else if (var == "N") {
        for (double v : sweep.values) {
            if (v != std::floor(v)) throw std::invalid_argument("config: N sweep values must be integers");
        }
    } else if (var == "T") {
        for (double v : sweep.values) {
            SimConfig s = sim;
            s.T = v;
            s.validate();
        }
    } else if (var == "delta") {
        for (double v : sweep.values) check_delta(sim.h, v);
    } else {
        throw std::invalid_argument("config: cannot sweep '" + var + "' (use M, T, N or delta)");
    }
}

ExperimentConfig parse_config(std::string_view json_text) {
    const json j = parse_json(json_text);
    const ExperimentKind kind = parse_experiment_kind(j.value("experiment", std::string("custom")));
    ExperimentConfig cfg = preset(kind, j.value("paper_scale", false));
    try {
        if (j.contains("model")) cfg.model = model_from_json(j.at("model"));
        if (j.contains("fhn")) cfg.fhn = fhn_from_json(j.at("fhn"));
        if (j.contains("sim")) cfg.sim = sim_from_json(j.at("sim"), cfg.sim);
        cfg.M = j.value("M", cfg.M);
        cfg.delta = j.value("delta", cfg.delta);
        if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            if (s.is_null() || s.empty()) {
                cfg.sweep = {};
            } else {
                if (!s.is_object() || s.size() != 1) {
                    throw std::invalid_argument("config: sweep must be an object with exactly one key");
                }
                cfg.sweep.variable = s.begin().key();
                cfg.sweep.values = s.begin().value().get<std::vector<double>>();
            }
        }
        if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
        cfg.first_particle_only = j.value("first_particle_only", cfg.first_particle_only);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    if (kind == ExperimentKind::rate_N) cfg.first_particle_only = true;
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) { return parse_config(read_file(file)); }

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = std::string(to_string(cfg.experiment));
    if (cfg.two_dimensional()) {
        j["fhn"] = fhn_to_json(cfg.fhn);
    } else if (cfg.model) {
        j["model"] = model_to_json_value(*cfg.model);
    }
    j["sim"] = sim_to_json(cfg.sim);
    j["M"] = cfg.M;
    j["delta"] = cfg.delta;
    j["seeds"] = cfg.seeds;
    if (cfg.sweep.empty()) {
        j["sweep"] = json::object();
    } else {
        j["sweep"] = {{cfg.sweep.variable, cfg.sweep.values}};
    }
    j["output_dir"] = cfg.output_dir.string();
    j["first_particle_only"] = cfg.first_particle_only;
    return j.dump(2);
}

ModelSpec parse_model(std::string_view json_text) {
    const json j = parse_json(json_text);
    try {
        return model_from_json(j.contains("model") ? j.at("model") : j);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("model: ") + e.what());
    }
}

std::string model_to_json(const ModelSpec& spec) { return model_to_json_value(spec).dump(2); }

FhnModel parse_fhn_model(std::string_view json_text) {
    const json j = parse_json(json_text);
    try {
        return j.contains("fhn") ? fhn_from_json(j.at("fhn")) : FhnModel{};
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("fhn: ") + e.what());
    }
}

ModelSpec cubic_model() {
    return ModelSpec::from_blocks({0.0, 0.0, 0.0, -1.0}, {0.0, -1.0}, {1.0},
                                  {false, false, false, true, false, false, true});
}

ModelSpec ou_known_diffusion_model() {
    return ModelSpec::from_blocks({0.0, -1.0}, {0.0, -1.0}, {1.0}, {false, true, false, false, false});
}

ModelSpec bistable_drift_model() {
    // alpha (x^3 - x) with alpha = -1; gamma x with gamma = -0.5.
    return ModelSpec::from_blocks({0.0, 1.0, 0.0, -1.0}, {0.0, -0.5}, {1.0},
                                  {false, true, false, true, false, true, true}, {{"alpha", {{1, -1.0}, {3, 1.0}}}});
}

ModelSpec bistable_interaction_model() {
    // alpha x with alpha = -1; gamma (x^3 - x) with gamma = -0.5.
    return ModelSpec::from_blocks({0.0, -1.0}, {0.0, 0.5, 0.0, -0.5}, {1.0},
                                  {false, true, false, true, false, true, true}, {{"gamma", {{3, -1.0}, {5, 1.0}}}});
}

ModelSpec multiplicative_model() {
    return ModelSpec::from_blocks({0.0, -1.0}, {0.0, -1.0}, {1.0, 0.0, 0.5},
                                  {false, false, false, false, true, false, true});
}

ExperimentConfig preset(ExperimentKind kind, bool paper_scale) {
    ExperimentConfig cfg;
    cfg.experiment = kind;
    cfg.sim.N = paper_scale ? 250 : 100;
    cfg.sim.T = paper_scale ? 1.0e4 : 2048.0;
    cfg.sim.h = 0.005;
    cfg.sim.init = InitialCondition::point(0.0);
    cfg.delta = cfg.sim.h;
    cfg.output_dir = std::string("out/") + std::string(to_string(kind));
    cfg.seeds = {1};

    switch (kind) {
        case ExperimentKind::sensitivity:
            cfg.model = ou_model(-1.0, 1.0);
            cfg.sweep = {"M", paper_scale ? std::vector<double>{1, 2, 3, 4, 5}
                                          : std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}};
            break;
        case ExperimentKind::rate_T:
            cfg.model = cubic_model();
            cfg.M = 2;
            cfg.sweep = {"T", paper_scale ? powers_of_two(1, 14) : powers_of_two(6, 12)};
            cfg.seeds = paper_scale ? std::vector<std::uint64_t>{1} : std::vector<std::uint64_t>{1, 2, 3, 4, 5};
            break;
        case ExperimentKind::rate_N:
            cfg.model = cubic_model();
            cfg.M = 2;
            cfg.sweep = {"N", paper_scale ? powers_of_two(1, 8) : powers_of_two(2, 7)};
            cfg.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
            cfg.first_particle_only = true;
            break;
        case ExperimentKind::comparison:
            cfg.model = ou_known_diffusion_model();
            cfg.M = 2;
            cfg.sweep = {"delta", powers_of_two(0, 5, 0.01)};
            break;
        case ExperimentKind::bistable_drift:
            cfg.model = bistable_drift_model();
            cfg.M = 4;
            break;
        case ExperimentKind::bistable_interaction:
            cfg.model = bistable_interaction_model();
            cfg.M = 4;
            break;
        case ExperimentKind::multiplicative:
            cfg.model = multiplicative_model();
            cfg.M = 4;
            break;
        case ExperimentKind::fhn:
            cfg.fhn = FhnModel{{0.5, 1.0, 2.0}, {true, true, true}};
            cfg.M = 4;
            break;
        case ExperimentKind::custom:
            cfg.model = ou_model(-1.0, 1.0);
            cfg.M = 2;
            break;
    }
    return cfg;
}

std::string estimate_to_json(const Estimate& est, int indent) {
    json j;
    j["theta_hat"] = std::vector<double>(est.theta_hat.data(), est.theta_hat.data() + est.theta_hat.size());
    j["residual"] = number_or_null(est.residual);
    j["cond"] = number_or_null(est.cond);
    j["rank_ok"] = est.rank_ok;
    j["M"] = est.M;
    j["P"] = est.P();
    j["col_labels"] = est.col_labels;
    j["warnings"] = est.warnings;
    return j.dump(indent);
}

}  // namespace ipm
