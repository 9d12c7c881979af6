#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ipm/mom_est.hpp"
#include "ipm/model.hpp"
#include "ipm/obs.hpp"
#include "ipm/sim.hpp"

namespace ipm {

inline constexpr int kFhnMomentP = 4;
inline constexpr int kFhnMomentQ = 2;

/// Stationarity condition E[L phi] = 0 for one monomial test function,
/// linear in (gamma, sigma, a).
struct FhnRow {
    std::string test_function;
    std::array<double, 3> coeffs{};  // over (gamma, sigma, a)
    double rhs = 0.0;
};

/// Rows for phi in {y, x^2, xy, y^2}. phi = x gives no information on the
/// unknowns and is left out.
std::vector<FhnRow> fhn_rows(const MomentSet2D& moments);

/// Which of (gamma, sigma, a) are unknown; known entries take their value
/// from `values`.
struct FhnModel {
    FhnParams values{};
    std::array<bool, 3> unknown{true, true, true};
};

/// Builds the least-squares system from the given rows plus, when qv_rate is
/// set, the row sigma = Q_X / (2T).
MomentSystem fhn_system(std::span<const FhnRow> rows, std::optional<double> qv_rate, const FhnModel& model = {});

/// Moments and quadratic variation of particle `particle` sampled every
/// delta, then solved by least squares.
Estimate estimate_fhn(const Trajectory& traj, std::size_t particle, double delta, const FhnModel& model = {});

Estimate estimate_fhn(const MomentSet2D& moments, double qv_rate, const FhnModel& model = {});

}  // namespace ipm
