#include "ipm/mom_est.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ipm/poly.hpp"

namespace ipm {

namespace {

// Splits a row over upsilon into unknown columns and a right-hand side.
MomentRow split_row(const ModelSpec& spec, const std::vector<double>& raw, double raw_rhs) {
    MomentRow row;
    row.coeffs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.P()));
    row.rhs = raw_rhs;
    const auto& unknowns = spec.unknowns();
    for (std::size_t p = 0; p < unknowns.size(); ++p) {
        double c = 0.0;
        for (auto [idx, w] : unknowns[p].terms) c += w * raw[idx];
        row.coeffs[static_cast<Eigen::Index>(p)] = c;
    }
    const auto ups = spec.upsilon();
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!spec.is_unknown(i)) row.rhs -= raw[i] * ups[i];
    }
    return row;
}

}  // namespace

int required_moment_order(const ModelSpec& spec, int M) {
    const int shift = std::max({spec.J() - 1, spec.K() - 1, spec.L() - 2});
    return std::max(M + shift, spec.L());
}

MomentRow moment_row(int m, const ModelSpec& spec, const MomentSet& moments) {
    if (m < 1) throw std::domain_error("moment_row: m must be >= 1");
    const int need = std::max({m + spec.J() - 1, m + spec.K() - 1, m + spec.L() - 2});
    if (moments.r_max() < need) {
        throw std::domain_error("moment_row: row m=" + std::to_string(m) + " needs moments up to order " +
                                std::to_string(need) + ", have " + std::to_string(moments.r_max()));
    }
    const auto& mu = moments.values;
    auto at = [&](int r) { return mu[static_cast<std::size_t>(r)]; };

    std::vector<double> raw(spec.size(), 0.0);
    for (int j = 0; j <= spec.J(); ++j) raw[spec.index(Block::drift, j)] = at(m + j - 1);
    for (int k = 0; k <= spec.K(); ++k) {
        double c = 0.0;
        for (int i = 0; i <= k; ++i) {
            const double sign = ((k - i) % 2 == 0) ? 1.0 : -1.0;
            c += sign * static_cast<double>(binom(static_cast<unsigned>(k), static_cast<unsigned>(i))) *
                 at(m + i - 1) * at(k - i);
        }
        raw[spec.index(Block::interaction, k)] = c;
    }
    if (m > 1) {
        for (int l = 0; l <= spec.L(); ++l) {
            raw[spec.index(Block::diffusion, l)] = static_cast<double>(m - 1) * at(m + l - 2);
        }
    }
    return split_row(spec, raw, 0.0);
}

MomentSystem assemble_system(int M, const ModelSpec& spec, const MomentSet& moments, double qv_rate) {
    const auto P = static_cast<int>(spec.P());
    if (P == 0) throw std::domain_error("assemble_system: model has no unknown coefficients (P = 0)");
    if (M < P - 1) {
        throw std::domain_error("assemble_system: underdetermined, M=" + std::to_string(M) + " < P-1=" +
                                std::to_string(P - 1));
    }
    const int need = required_moment_order(spec, M);
    if (moments.r_max() < need) {
        throw std::domain_error("assemble_system: need moments up to order " + std::to_string(need) +
                                ", have " + std::to_string(moments.r_max()));
    }
    if (!std::isfinite(qv_rate)) throw std::domain_error("assemble_system: non-finite quadratic variation");

    MomentSystem sys;
    sys.m_rows = M;
    sys.col_labels = spec.column_labels();
    sys.design.resize(M + 1, P);
    sys.rhs.resize(M + 1);
    for (int m = 1; m <= M; ++m) {
        const MomentRow row = moment_row(m, spec, moments);
        sys.design.row(m - 1) = row.coeffs.transpose();
        sys.rhs[m - 1] = row.rhs;
    }
    std::vector<double> raw(spec.size(), 0.0);
    for (int l = 0; l <= spec.L(); ++l) raw[spec.index(Block::diffusion, l)] = moments[l];
    const MomentRow qv = split_row(spec, raw, qv_rate);
    sys.design.row(M) = qv.coeffs.transpose();
    sys.rhs[M] = qv.rhs;

    if (!sys.design.allFinite() || !sys.rhs.allFinite()) {
        throw std::domain_error("assemble_system: non-finite entries (moments overflow?)");
    }
    for (int i = 0; i <= M; ++i) {
        if (sys.design.row(i).isZero(0.0) && sys.rhs[i] != 0.0) {
            sys.warnings.push_back(i < M ? "inconsistent row: moment equation m=" + std::to_string(i + 1) +
                                               " has no unknowns but nonzero rhs"
                                         : "inconsistent row: quadratic-variation row has no unknowns "
                                           "but nonzero rhs");
        }
    }
    return sys;
}

Estimate solve(const MomentSystem& system) {
    const auto& A = system.design;
    const auto& b = system.rhs;
    if (A.rows() != b.size() || A.cols() == 0 || A.rows() < A.cols()) {
        throw std::domain_error("solve: malformed system");
    }
    Estimate est;
    est.M = system.m_rows;
    est.col_labels = system.col_labels;
    est.warnings = system.warnings;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    constexpr double kRankTol = 1e-12;
    svd.setThreshold(kRankTol);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv[0] : 0.0;
    const double smin = sv.size() > 0 ? sv[sv.size() - 1] : 0.0;
    est.rank_ok = smax > 0.0 && smin > kRankTol * smax;
    est.cond = est.rank_ok ? (smax / smin) * (smax / smin) : std::numeric_limits<double>::infinity();
    if (smax > 0.0) {
        est.theta_hat = svd.solve(b);
    } else {
        est.theta_hat = Eigen::VectorXd::Zero(A.cols());
    }
    est.residual = (A * est.theta_hat - b).norm();
    if (!est.rank_ok) est.warnings.push_back("rank-deficient design: minimum-norm solution returned");
    if (b.isZero(0.0)) {
        est.trivial_hazard = true;
        est.warnings.push_back("trivial-solution hazard: homogeneous system with zero right-hand side");
    }
    return est;
}

double ou_analytic_moment(int r, double alpha1, double sigma0) {
    if (!(alpha1 < 1.0)) throw std::domain_error("ou_analytic_moment: requires alpha1 < 1");
    if (!(sigma0 > 0.0)) throw std::domain_error("ou_analytic_moment: requires sigma0 > 0");
    if (r < 0) throw std::domain_error("ou_analytic_moment: negative order");
    if (r % 2 == 1) return 0.0;
    const double var = sigma0 / (1.0 - alpha1);
    return std::pow(var, r / 2) * static_cast<double>(double_factorial(r - 1));
}

MomentSet ou_analytic_moments(int r_max, double alpha1, double sigma0) {
    MomentSet m;
    m.label = MomentSet::Label::analytic;
    m.values.resize(static_cast<std::size_t>(r_max) + 1);
    for (int r = 0; r <= r_max; ++r) m.values[static_cast<std::size_t>(r)] = ou_analytic_moment(r, alpha1, sigma0);
    return m;
}

MomentSystem ou_exact_system(double alpha1, double sigma0, int M_even) {
    if (M_even < 2 || M_even % 2 != 0) throw std::domain_error("ou_exact_system: M must be even and >= 2");
    const int rows = M_even / 2 + 1;
    MomentSystem sys;
    sys.m_rows = M_even;
    sys.col_labels = {"alpha_1", "sigma_0"};
    sys.design = Eigen::MatrixXd::Zero(rows, 2);
    sys.rhs.resize(rows);
    int i = 0;
    for (int m = 2; m <= M_even; m += 2, ++i) {
        const double mm = ou_analytic_moment(m, alpha1, sigma0);
        sys.design(i, 0) = mm;
        sys.design(i, 1) = static_cast<double>(m - 1) * ou_analytic_moment(m - 2, alpha1, sigma0);
        sys.rhs[i] = mm;
    }
    sys.design(i, 1) = 1.0;
    sys.rhs[i] = sigma0;
    return sys;
}

ModelSpec ou_model(double alpha1, double sigma0) {
    return ModelSpec::from_blocks({0.0, alpha1}, {0.0, -1.0}, {sigma0}, {false, true, false, false, true});
}

}  // namespace ipm
