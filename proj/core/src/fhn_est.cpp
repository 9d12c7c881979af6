#include "ipm/fhn_est.hpp"

#include <stdexcept>

namespace ipm {

namespace {

constexpr std::array<const char*, 3> kFhnLabels{"gamma", "sigma", "a"};

}  // namespace

std::vector<FhnRow> fhn_rows(const MomentSet2D& mu) {
    if (!mu.covers(kFhnMomentP, 0) || !mu.covers(3, 1) || !mu.covers(0, kFhnMomentQ)) {
        throw std::domain_error("fhn_rows: moments must cover p <= 4 and q <= 2");
    }
    const double m10 = mu(1, 0), m01 = mu(0, 1);
    const double m20 = mu(2, 0), m11 = mu(1, 1), m02 = mu(0, 2);
    const double m40 = mu(4, 0), m31 = mu(3, 1);

    std::vector<FhnRow> rows;
    rows.push_back({"y", {0.0, 0.0, 1.0}, m10});
    rows.push_back({"x^2",
                    {2.0 * (m20 - m10 * m10), 2.0, 0.0},
                    -(2.0 * m20 - (2.0 / 3.0) * m40 + 2.0 * m11)});
    rows.push_back({"xy",
                    {m11 - m10 * m01, 0.0, m10},
                    -(m11 - m31 / 3.0 + m02 - m20)});
    rows.push_back({"y^2", {0.0, 0.0, 2.0 * m01}, 2.0 * m11});
    return rows;
}

MomentSystem fhn_system(std::span<const FhnRow> rows, std::optional<double> qv_rate, const FhnModel& model) {
    const std::array<double, 3> known{model.values.gamma, model.values.sigma, model.values.a};
    std::vector<int> cols;
    for (int j = 0; j < 3; ++j) {
        if (model.unknown[static_cast<std::size_t>(j)]) cols.push_back(j);
    }
    if (cols.empty()) throw std::domain_error("fhn_system: no unknown parameters");

    std::vector<FhnRow> all(rows.begin(), rows.end());
    if (qv_rate) all.push_back({"qv", {0.0, 1.0, 0.0}, *qv_rate});
    if (all.size() < cols.size()) throw std::domain_error("fhn_system: underdetermined");

    MomentSystem sys;
    sys.m_rows = static_cast<int>(rows.size());
    for (int c : cols) sys.col_labels.emplace_back(kFhnLabels[static_cast<std::size_t>(c)]);
    sys.design.resize(static_cast<Eigen::Index>(all.size()), static_cast<Eigen::Index>(cols.size()));
    sys.rhs.resize(static_cast<Eigen::Index>(all.size()));
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        double rhs = all[i].rhs;
        for (std::size_t j = 0; j < 3; ++j) {
            if (!model.unknown[j]) rhs -= all[i].coeffs[j] * known[j];
        }
        for (std::size_t c = 0; c < cols.size(); ++c) {
            sys.design(r, static_cast<Eigen::Index>(c)) = all[i].coeffs[static_cast<std::size_t>(cols[c])];
        }
        sys.rhs[r] = rhs;
        if (sys.design.row(r).isZero(0.0) && rhs != 0.0) {
            sys.warnings.push_back("inconsistent row: " + all[i].test_function +
                                   " has no unknowns but nonzero rhs");
        }
    }
    if (!sys.design.allFinite() || !sys.rhs.allFinite()) {
        throw std::domain_error("fhn_system: non-finite entries");
    }
    return sys;
}

Estimate estimate_fhn(const MomentSet2D& moments, double qv_rate, const FhnModel& model) {
    const auto rows = fhn_rows(moments);
    return solve(fhn_system(rows, qv_rate, model));
}

Estimate estimate_fhn(const Trajectory& traj, std::size_t particle, double delta, const FhnModel& model) {
    if (traj.dims != 2) throw std::domain_error("estimate_fhn: trajectory must be two-dimensional");
    if (particle >= traj.N) throw std::domain_error("estimate_fhn: particle index out of range");
    const auto x = traj.path(0, particle);
    const auto y = traj.path(1, particle);
    const MomentSet2D mu = empirical_moments_2d(x, y, kFhnMomentP, kFhnMomentQ, traj.h, delta);
    const double qv = quadratic_variation_rate(x, traj.h, delta);
    return estimate_fhn(mu, qv, model);
}

}  // namespace ipm
