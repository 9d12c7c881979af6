#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace ipm::testing {

double naive_poly(std::span<const double> c, double x) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * std::pow(x, static_cast<double>(i));
    return s;
}

double naive_interaction(std::span<const double> gamma, std::span<const double> particles, double x) {
    double s = 0.0;
    for (double xi : particles) s += naive_poly(gamma, x - xi);
    return s / static_cast<double>(particles.size());
}

std::vector<std::vector<double>> reference_ips(const ModelSpec& spec, const SimConfig& cfg) {
    const std::size_t N = cfg.N, steps = cfg.steps();
    std::vector<NormalStream> rng;
    for (std::size_t n = 0; n < N; ++n) rng.emplace_back(cfg.seed, cfg.stream_id(n));
    std::vector<double> x(N);
    for (std::size_t n = 0; n < N; ++n) {
        x[n] = cfg.init.kind == InitialCondition::Kind::gaussian ? cfg.init.x0 + std::sqrt(cfg.init.var) * rng[n]()
                                                                 : cfg.init.x0;
    }
    std::vector<std::vector<double>> out(N, std::vector<double>(steps + 1));
    for (std::size_t n = 0; n < N; ++n) out[n][0] = x[n];
    for (std::size_t s = 1; s <= steps; ++s) {
        std::vector<double> next(N);
        for (std::size_t n = 0; n < N; ++n) {
            const double drift = naive_poly(spec.alpha(), x[n]) + naive_interaction(spec.gamma(), x, x[n]);
            const double diff = naive_poly(spec.sigma(), x[n]);
            next[n] = x[n] + drift * cfg.h + std::sqrt(2.0 * diff * cfg.h) * rng[n]();
        }
        x = next;
        for (std::size_t n = 0; n < N; ++n) out[n][s] = x[n];
    }
    return out;
}

std::array<std::vector<std::vector<double>>, 2> reference_fhn(const FhnParams& p, const SimConfig& cfg) {
    const std::size_t N = cfg.N, steps = cfg.steps();
    std::vector<NormalStream> rng;
    for (std::size_t n = 0; n < N; ++n) rng.emplace_back(cfg.seed, cfg.stream_id(n));
    std::vector<double> x(N, cfg.init.x0), y(N, cfg.init.y0);
    std::array<std::vector<std::vector<double>>, 2> out;
    out[0].assign(N, std::vector<double>(steps + 1));
    out[1].assign(N, std::vector<double>(steps + 1));
    for (std::size_t n = 0; n < N; ++n) {
        out[0][n][0] = x[n];
        out[1][n][0] = y[n];
    }
    for (std::size_t s = 1; s <= steps; ++s) {
        std::vector<double> xn(N), yn(N);
        for (std::size_t n = 0; n < N; ++n) {
            double pull = 0.0;
            for (std::size_t i = 0; i < N; ++i) pull += x[n] - x[i];
            pull /= static_cast<double>(N);
            const double bx = x[n] - std::pow(x[n], 3) / 3.0 + y[n] + p.gamma * pull;
            xn[n] = x[n] + bx * cfg.h + std::sqrt(2.0 * p.sigma * cfg.h) * rng[n]();
            yn[n] = y[n] + (p.a - x[n]) * cfg.h;
        }
        x = xn;
        y = yn;
        for (std::size_t n = 0; n < N; ++n) {
            out[0][n][s] = x[n];
            out[1][n][s] = y[n];
        }
    }
    return out;
}

ReferenceComparison compare_with_reference(const ModelSpec& spec, const SimConfig& cfg) {
    const auto ref = reference_ips(spec, cfg);
    ReferenceComparison out;
    auto compare = [&](std::size_t s, std::span<const double> x, std::span<const double>) {
        for (std::size_t n = 0; n < x.size(); ++n) {
            const double b = ref[n][s];
            const double dev = std::abs(x[n] - b);
            out.max_relative = std::max(out.max_relative, b == 0.0 ? (dev == 0.0 ? 0.0 : INFINITY) : dev / std::abs(b));
            out.max_scaled = std::max(out.max_scaled, dev / std::max(1.0, std::abs(b)));
            ++out.compared;
        }
    };
    try {
        run_ips(spec, cfg, compare);
    } catch (const SimulationError& e) {
        out.blew_up = true;
        bool nonfinite = false;
        for (const auto& path : ref) nonfinite = nonfinite || !std::isfinite(path[e.step()]);
        out.reference_agrees = nonfinite;
    }
    return out;
}

std::uint64_t factorial(unsigned n) {
    std::uint64_t f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    if (n % 2 != 0) ++n;
    const double dx = (b - a) / static_cast<double>(n);
    double s = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(a + static_cast<double>(i) * dx);
    return s * dx / 3.0;
}

std::vector<double> stationary_moments(const ModelSpec& spec, int r_max, double L, std::size_t panels) {
    const int K = spec.K();
    const int r_need = std::max(r_max, K);
    const std::vector<double> alpha(spec.alpha().begin(), spec.alpha().end());
    const std::vector<double> gamma(spec.gamma().begin(), spec.gamma().end());
    const std::vector<double> sigma(spec.sigma().begin(), spec.sigma().end());

    const std::size_t n = panels % 2 == 0 ? panels : panels + 1;
    const double dx = 2.0 * L / static_cast<double>(n);
    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i) grid[i] = -L + static_cast<double>(i) * dx;

    std::vector<double> mom(static_cast<std::size_t>(r_need) + 1, 0.0);
    mom[0] = 1.0;
    for (int r = 2; r <= r_need; r += 2) mom[static_cast<std::size_t>(r)] = 1.0;

    auto binomial = [](int k, int i) {
        return static_cast<double>(factorial(static_cast<unsigned>(k))) /
               static_cast<double>(factorial(static_cast<unsigned>(i)) * factorial(static_cast<unsigned>(k - i)));
    };

    for (int iter = 0; iter < 200; ++iter) {
        auto b_over_h = [&](double x) {
            double b = naive_poly(alpha, x);
            for (int k = 0; k <= K; ++k) {
                double e = 0.0;  // E[(x - X)^k]
                for (int i = 0; i <= k; ++i) {
                    e += binomial(k, i) * std::pow(x, i) * std::pow(-1.0, k - i) * mom[static_cast<std::size_t>(k - i)];
                }
                b += gamma[static_cast<std::size_t>(k)] * e;
            }
            return b / naive_poly(sigma, x);
        };
        // phi(x) = int_0^x b/h, Simpson on each panel using its midpoint.
        std::vector<double> phi(n + 1, 0.0);
        const std::size_t mid = n / 2;
        for (std::size_t i = mid; i < n; ++i) {
            const double a = grid[i], c = grid[i + 1];
            phi[i + 1] = phi[i] + (c - a) / 6.0 * (b_over_h(a) + 4.0 * b_over_h(0.5 * (a + c)) + b_over_h(c));
        }
        for (std::size_t i = mid; i > 0; --i) {
            const double a = grid[i - 1], c = grid[i];
            phi[i - 1] = phi[i] - (c - a) / 6.0 * (b_over_h(a) + 4.0 * b_over_h(0.5 * (a + c)) + b_over_h(c));
        }
        double pmax = phi[0];
        for (double v : phi) pmax = std::max(pmax, v);
        std::vector<double> w(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            const double coef = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            w[i] = coef * std::exp(phi[i] - pmax) / naive_poly(sigma, grid[i]);
        }
        std::vector<double> next(mom.size(), 0.0);
        double z = 0.0;
        for (std::size_t i = 0; i <= n; ++i) z += w[i];
        for (std::size_t r = 0; r < next.size(); ++r) {
            double s = 0.0;
            for (std::size_t i = 0; i <= n; ++i) s += w[i] * std::pow(grid[i], static_cast<double>(r));
            next[r] = s / z;
        }
        double change = 0.0;
        for (int k = 1; k <= K; ++k) {
            change = std::max(change, std::abs(next[static_cast<std::size_t>(k)] - mom[static_cast<std::size_t>(k)]));
        }
        mom = next;
        if (change < 1e-15) break;
    }
    mom.resize(static_cast<std::size_t>(r_max) + 1);
    return mom;
}

}  // namespace ipm::testing
