#pragma once

#include <span>

#include "ipm/obs.hpp"

namespace ipm {

// Closed-form drift estimators for the centred mean-field OU process with
// the diffusion coefficient fixed to 1. Both use sums over i = 0..I-1 of the
// path subsampled every delta time units.

/// 1 + sum X_i (X_{i+1} - X_i) / (delta sum X_i^2).
double mle_ou(std::span<const double> path, double h, double delta);
double mle_ou(const OuSums& sums, double delta);

/// 1 + log(sum X_i X_{i+1} / sum X_i^2) / delta.
double eigenfn_ou(std::span<const double> path, double h, double delta);
double eigenfn_ou(const OuSums& sums, double delta);

}  // namespace ipm
