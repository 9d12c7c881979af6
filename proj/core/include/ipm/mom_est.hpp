#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ipm/model.hpp"
#include "ipm/obs.hpp"

namespace ipm {

/// Stacked moment equations (m = 1..M) followed by the quadratic-variation
/// row. Columns follow ModelSpec::unknowns().
struct MomentSystem {
    Eigen::MatrixXd design;
    Eigen::VectorXd rhs;
    std::vector<std::string> col_labels;
    int m_rows = 0;
    std::vector<std::string> warnings;
};

struct Estimate {
    Eigen::VectorXd theta_hat;
    double residual = 0.0;  // ||design * theta_hat - rhs||_2
    double cond = 1.0;      // spectral condition number of design^T design
    bool rank_ok = true;
    bool trivial_hazard = false;
    int M = 0;
    std::vector<std::string> col_labels;
    std::vector<std::string> warnings;

    std::size_t P() const noexcept { return static_cast<std::size_t>(theta_hat.size()); }
};

struct MomentRow {
    Eigen::VectorXd coeffs;
    double rhs = 0.0;
};

/// Highest moment index read when assembling M moment rows plus the
/// quadratic-variation row: max(M + max(J-1, K-1, L-2), L).
int required_moment_order(const ModelSpec& spec, int M);

/// Row m of the stationary moment equations
///   sum_j alpha_j M^(m+j-1)
///   + sum_k gamma_k sum_i (-1)^(k-i) C(k,i) M^(m+i-1) M^(k-i)
///   + sum_l sigma_l (m-1) M^(m+l-2) = 0,
/// with known terms moved to the right-hand side.
MomentRow moment_row(int m, const ModelSpec& spec, const MomentSet& moments);

/// Rows m = 1..M plus sum_l sigma_l M^(l) = qv_rate. Throws
/// std::domain_error when P == 0, M < P - 1 or moments are too short.
MomentSystem assemble_system(int M, const ModelSpec& spec, const MomentSet& moments, double qv_rate);

/// Least squares through the SVD of the design matrix.
Estimate solve(const MomentSystem& system);

/// E[X^r] of the invariant law N(0, sigma0 / (1 - alpha1)) of the mean-field
/// OU process. Throws std::domain_error unless alpha1 < 1 and sigma0 > 0.
double ou_analytic_moment(int r, double alpha1, double sigma0);

/// Exact mean-field OU system for theta = (alpha_1, sigma_0) using the even
/// rows m = 2, 4, ..., M_even and the quadratic-variation row sigma_0 = Q.
MomentSystem ou_exact_system(double alpha1, double sigma0, int M_even);

/// OU model of the mean-field example: f = alpha1 x, g = -x, h = sigma0,
/// with (alpha_1, sigma_0) unknown.
ModelSpec ou_model(double alpha1 = -1.0, double sigma0 = 1.0);

MomentSet ou_analytic_moments(int r_max, double alpha1, double sigma0);

}  // namespace ipm
