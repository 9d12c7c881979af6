#include "ipm/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ipm {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void draw_initial(const InitialCondition& init, std::vector<NormalStream>& streams,
                  std::span<double> x, std::span<double> y) {
    const double sd = std::sqrt(init.var);
    for (std::size_t n = 0; n < x.size(); ++n) {
        if (init.kind == InitialCondition::Kind::gaussian) {
            x[n] = init.x0 + sd * streams[n]();
            if (!y.empty()) y[n] = init.y0 + sd * streams[n]();
        } else {
            x[n] = init.x0;
            if (!y.empty()) y[n] = init.y0;
        }
    }
}

std::vector<NormalStream> make_streams(const SimConfig& cfg) {
    std::vector<NormalStream> streams;
    streams.reserve(cfg.N);
    for (std::size_t n = 0; n < cfg.N; ++n) streams.emplace_back(cfg.seed, cfg.stream_id(n));
    return streams;
}

[[noreturn]] void throw_blowup(std::size_t step, std::size_t particle) {
    std::ostringstream os;
    os << "blow-up at step " << step << " (particle " << particle << ")";
    throw SimulationError(os.str(), step);
}

[[noreturn]] void throw_diffusion(std::size_t step, double x, double value) {
    std::ostringstream os;
    os.precision(17);
    os << "diffusion nonpositive at x=" << x << " (h(x)=" << value << ", step " << step << ")";
    throw SimulationError(os.str(), step);
}

}  // namespace

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t stream_id)
    : engine_(splitmix64(seed ^ splitmix64(stream_id ^ 0xD1B54A32D192ED03ULL))) {}

Polynomial interaction_polynomial(std::span<const double> power_sums, std::size_t N,
                                  std::span<const double> gamma) {
    const std::size_t K = gamma.size() - 1;
    if (power_sums.size() < gamma.size()) {
        throw std::invalid_argument("interaction_polynomial: need power sums up to order K");
    }
    std::vector<double> c(gamma.size(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(N);
    for (std::size_t k = 0; k <= K; ++k) {
        if (gamma[k] == 0.0) continue;
        for (std::size_t j = 0; j <= k; ++j) {
            const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
            c[j] += gamma[k] * static_cast<double>(binom(static_cast<unsigned>(k), static_cast<unsigned>(j))) *
                    sign * power_sums[k - j];
        }
    }
    for (double& v : c) v *= inv_n;
    return Polynomial(std::move(c));
}

double interaction_mean(double x, std::span<const double> power_sums, std::size_t N,
                        std::span<const double> gamma) {
    return interaction_polynomial(power_sums, N, gamma)(x);
}

void run_ips(const ModelSpec& spec, const SimConfig& cfg, const StepObserver& observer) {
    const std::size_t steps = cfg.steps();
    const std::size_t N = cfg.N;
    const double dt = cfg.h;

    const Polynomial drift = spec.drift();
    const Polynomial diff = spec.diffusion();
    const std::vector<double> gamma(spec.gamma().begin(), spec.gamma().end());
    const bool interacting = std::any_of(gamma.begin(), gamma.end(), [](double g) { return g != 0.0; });
    const std::size_t K = gamma.size() - 1;

    auto streams = make_streams(cfg);
    std::vector<double> x(N), next(N), sums(K + 1);
    draw_initial(cfg.init, streams, x, {});
    if (observer) observer(0, x, {});

    Polynomial inter;
    for (std::size_t s = 1; s <= steps; ++s) {
        // Phase 1: power sums from the state at time (s-1)h.
        if (interacting) {
            std::fill(sums.begin(), sums.end(), 0.0);
            for (double xi : x) {
                double p = 1.0;
                for (std::size_t k = 0; k <= K; ++k) {
                    sums[k] += p;
                    p *= xi;
                }
            }
            inter = interaction_polynomial(sums, N, gamma);
        }
        // Phase 2: advance every particle from the frozen sums.
        for (std::size_t n = 0; n < N; ++n) {
            const double xv = x[n];
            const double dv = diff(xv);
            if (dv < 0.0) throw_diffusion(s, xv, dv);
            const double b = drift(xv) + (interacting ? inter(xv) : 0.0);
            const double xn = xv + b * dt + std::sqrt(2.0 * dv * dt) * streams[n]();
            if (!std::isfinite(xn)) throw_blowup(s, n);
            next[n] = xn;
        }
        x.swap(next);
        if (observer) observer(s, x, {});
    }
}

void run_fhn(const FhnParams& params, const SimConfig& cfg, const StepObserver& observer) {
    if (!(params.sigma >= 0.0)) {
        throw std::invalid_argument("run_fhn: sigma must be non-negative");
    }
    const std::size_t steps = cfg.steps();
    const std::size_t N = cfg.N;
    const double dt = cfg.h;
    const double noise = std::sqrt(2.0 * params.sigma * dt);

    auto streams = make_streams(cfg);
    std::vector<double> x(N), y(N), xn(N), yn(N);
    draw_initial(cfg.init, streams, x, y);
    if (observer) observer(0, x, y);

    for (std::size_t s = 1; s <= steps; ++s) {
        double mean = 0.0;
        for (double xi : x) mean += xi;
        mean /= static_cast<double>(N);
        for (std::size_t n = 0; n < N; ++n) {
            const double xv = x[n];
            const double yv = y[n];
            const double bx = xv - xv * xv * xv / 3.0 + yv + params.gamma * (xv - mean);
            xn[n] = xv + bx * dt + noise * streams[n]();
            yn[n] = yv + (params.a - xv) * dt;
            if (!std::isfinite(xn[n]) || !std::isfinite(yn[n])) throw_blowup(s, n);
        }
        x.swap(xn);
        y.swap(yn);
        if (observer) observer(s, x, y);
    }
}

namespace {

Trajectory make_trajectory(int dims, const SimConfig& cfg) {
    Trajectory traj;
    traj.dims = dims;
    traj.N = cfg.N;
    traj.h = cfg.h;
    traj.steps = cfg.steps();
    traj.data.assign(static_cast<std::size_t>(dims) * traj.N * traj.points(), 0.0);
    return traj;
}

}  // namespace

Trajectory simulate_ips(const ModelSpec& spec, const SimConfig& cfg) {
    Trajectory traj = make_trajectory(1, cfg);
    const std::size_t stride = traj.points();
    run_ips(spec, cfg, [&](std::size_t s, std::span<const double> x, std::span<const double>) {
        for (std::size_t n = 0; n < x.size(); ++n) traj.data[n * stride + s] = x[n];
    });
    return traj;
}

Trajectory simulate_fhn(double gamma, double sigma, double a, const SimConfig& cfg) {
    Trajectory traj = make_trajectory(2, cfg);
    const std::size_t stride = traj.points();
    const std::size_t N = cfg.N;
    run_fhn({gamma, sigma, a}, cfg, [&](std::size_t s, std::span<const double> x, std::span<const double> y) {
        for (std::size_t n = 0; n < N; ++n) {
            traj.data[n * stride + s] = x[n];
            traj.data[(N + n) * stride + s] = y[n];
        }
    });
    return traj;
}

}  // namespace ipm
