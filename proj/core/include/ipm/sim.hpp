#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ipm/model.hpp"
#include "ipm/poly.hpp"

namespace ipm {

/// Uniform-grid sample paths. data is laid out (dim, particle, time):
/// data[(d * N + n) * (steps + 1) + t] is coordinate d of particle n at t*h.
struct Trajectory {
    int dims = 1;
    std::size_t N = 0;
    double h = 0.0;
    std::size_t steps = 0;
    std::vector<double> data;

    std::size_t points() const noexcept { return steps + 1; }
    double final_time() const noexcept { return static_cast<double>(steps) * h; }

    std::span<const double> path(int dim, std::size_t n) const {
        return std::span(data).subspan((static_cast<std::size_t>(dim) * N + n) * points(), points());
    }
    std::span<double> path(int dim, std::size_t n) {
        return std::span(data).subspan((static_cast<std::size_t>(dim) * N + n) * points(), points());
    }
};

class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, std::size_t step)
        : std::runtime_error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Independent standard-normal stream for one particle. The stream depends
/// only on (seed, stream id), so adding particles never perturbs existing
/// ones.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream_id);
    double operator()() { return dist_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> dist_;
};

/// Polynomial in x equal to (1/N) sum_i g(x - X_i; gamma), built from the
/// power sums S_p = sum_i X_i^p (p = 0..K) by binomial expansion.
Polynomial interaction_polynomial(std::span<const double> power_sums, std::size_t N,
                                  std::span<const double> gamma);

/// (1/N) sum_k gamma_k sum_j C(k,j) x^j (-1)^(k-j) S_(k-j).
double interaction_mean(double x, std::span<const double> power_sums, std::size_t N,
                        std::span<const double> gamma);

/// Called once with the initial state (step 0) and after every Euler step.
/// y is empty for one-dimensional systems.
using StepObserver =
    std::function<void(std::size_t step, std::span<const double> x, std::span<const double> y)>;

/// Euler-Maruyama for the interacting particle system with polynomial
/// drift, interaction and diffusion. All particles advance synchronously
/// from the power sums of the current state.
void run_ips(const ModelSpec& spec, const SimConfig& cfg, const StepObserver& observer);

/// Euler-Maruyama for the interacting FitzHugh-Nagumo system
///   dX = (X - X^3/3 + Y + gamma (X - mean X)) dt + sqrt(2 sigma) dB,
///   dY = (a - X) dt.
void run_fhn(const FhnParams& params, const SimConfig& cfg, const StepObserver& observer);

Trajectory simulate_ips(const ModelSpec& spec, const SimConfig& cfg);
Trajectory simulate_fhn(double gamma, double sigma, double a, const SimConfig& cfg);

}  // namespace ipm
