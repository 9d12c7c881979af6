#include "ipm/obs.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ipm {

namespace {

void add_powers(std::vector<double>& sums, double x) {
    double p = 1.0;
    sums[0] += 1.0;
    for (std::size_t r = 1; r < sums.size(); ++r) {
        p *= x;
        sums[r] += p;
    }
}

void add_mixed(std::vector<double>& sums, std::vector<double>& ypow, int p_max, int q_max, double x,
               double y) {
    const auto qn = static_cast<std::size_t>(q_max + 1);
    ypow[0] = 1.0;
    for (std::size_t q = 1; q < qn; ++q) ypow[q] = ypow[q - 1] * y;
    double xp = 1.0;
    for (int p = 0; p <= p_max; ++p) {
        for (std::size_t q = 0; q < qn; ++q) sums[static_cast<std::size_t>(p) * qn + q] += xp * ypow[q];
        xp *= x;
    }
}

MomentSet finish_moments(const std::vector<double>& sums, std::size_t n) {
    MomentSet m;
    m.values.resize(sums.size());
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t r = 0; r < sums.size(); ++r) m.values[r] = sums[r] * inv;
    m.values[0] = 1.0;
    return m;
}

MomentSet2D finish_moments_2d(const std::vector<double>& sums, int p_max, int q_max, std::size_t n) {
    MomentSet2D m;
    m.p_max = p_max;
    m.q_max = q_max;
    m.values.resize(sums.size());
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < sums.size(); ++i) m.values[i] = sums[i] * inv;
    m.values[0] = 1.0;
    return m;
}

void check_r_max(int r_max) {
    if (r_max < 0) throw std::domain_error("moments: r_max must be non-negative");
}

}  // namespace

double MomentSet2D::operator()(int p, int q) const {
    if (!covers(p, q)) {
        throw std::domain_error("MomentSet2D: moment (" + std::to_string(p) + "," + std::to_string(q) +
                                ") not available");
    }
    return values[static_cast<std::size_t>(p * (q_max + 1) + q)];
}

double& MomentSet2D::at(int p, int q) {
    if (!covers(p, q)) throw std::domain_error("MomentSet2D: index out of range");
    return values[static_cast<std::size_t>(p * (q_max + 1) + q)];
}

std::size_t stride_for(double h, double delta) {
    if (!(h > 0.0) || !(delta > 0.0)) throw std::domain_error("stride_for: h and delta must be positive");
    const double ratio = delta / h;
    const double s = std::round(ratio);
    if (s < 1.0 || std::abs(s * h - delta) > 1e-9 * delta) {
        throw std::domain_error("delta=" + std::to_string(delta) + " is not an integer multiple of h=" +
                                std::to_string(h));
    }
    return static_cast<std::size_t>(s);
}

MomentSet empirical_moments(std::span<const double> path, int r_max) {
    check_r_max(r_max);
    if (path.empty()) throw std::domain_error("empirical_moments: empty path");
    std::vector<double> sums(static_cast<std::size_t>(r_max) + 1, 0.0);
    for (double x : path) add_powers(sums, x);
    return finish_moments(sums, path.size());
}

MomentSet empirical_moments_subsampled(std::span<const double> path, double h, int r_max, double delta) {
    check_r_max(r_max);
    if (path.empty()) throw std::domain_error("empirical_moments_subsampled: empty path");
    const std::size_t s = stride_for(h, delta);
    std::vector<double> sums(static_cast<std::size_t>(r_max) + 1, 0.0);
    std::size_t n = 0;
    for (std::size_t i = 0; i < path.size(); i += s, ++n) add_powers(sums, path[i]);
    return finish_moments(sums, n);
}

double quadratic_variation_rate(std::span<const double> path, double h, double delta) {
    const std::size_t s = stride_for(h, delta);
    if (path.empty() || (path.size() - 1) / s < 1) {
        throw std::domain_error("quadratic_variation_rate: need at least two subsampled points");
    }
    double q = 0.0;
    std::size_t increments = 0;
    for (std::size_t i = s; i < path.size(); i += s, ++increments) {
        const double d = path[i] - path[i - s];
        q += d * d;
    }
    const double T = static_cast<double>(increments) * static_cast<double>(s) * h;
    return q / (2.0 * T);
}

MomentSet2D empirical_moments_2d(std::span<const double> x, std::span<const double> y, int p_max, int q_max,
                                 double h, double delta) {
    if (p_max < 0 || q_max < 0) throw std::domain_error("empirical_moments_2d: negative order");
    if (x.empty() || x.size() != y.size()) {
        throw std::domain_error("empirical_moments_2d: paths must be non-empty and equally long");
    }
    const std::size_t s = stride_for(h, delta);
    std::vector<double> sums(static_cast<std::size_t>((p_max + 1) * (q_max + 1)), 0.0);
    std::vector<double> ypow(static_cast<std::size_t>(q_max + 1));
    std::size_t n = 0;
    for (std::size_t i = 0; i < x.size(); i += s, ++n) add_mixed(sums, ypow, p_max, q_max, x[i], y[i]);
    return finish_moments_2d(sums, p_max, q_max, n);
}

OuSums ou_sums(std::span<const double> path, double h, double delta) {
    const std::size_t s = stride_for(h, delta);
    if (path.empty() || (path.size() - 1) / s < 1) {
        throw std::domain_error("ou_sums: need at least two subsampled points");
    }
    OuSums out;
    for (std::size_t i = s; i < path.size(); i += s) {
        const double prev = path[i - s];
        const double cur = path[i];
        out.cross += prev * cur;
        out.square += prev * prev;
        out.increment += prev * (cur - prev);
        ++out.count;
    }
    return out;
}

PathAccumulator::PathAccumulator(int r_max, std::size_t stride)
    : r_max_(r_max), stride_(stride), sums_(static_cast<std::size_t>(r_max) + 1, 0.0) {
    check_r_max(r_max);
    if (stride == 0) throw std::domain_error("PathAccumulator: stride must be positive");
}

void PathAccumulator::push(double x) {
    if (seen_++ % stride_ != 0) return;
    add_powers(sums_, x);
    if (used_ > 0) {
        const double d = x - last_;
        qv_ += d * d;
        ou_.cross += last_ * x;
        ou_.square += last_ * last_;
        ou_.increment += last_ * (x - last_);
        ++ou_.count;
    }
    last_ = x;
    ++used_;
}

MomentSet PathAccumulator::moments() const {
    if (used_ == 0) throw std::domain_error("PathAccumulator: no samples");
    return finish_moments(sums_, used_);
}

double PathAccumulator::quadratic_variation_rate(double h) const {
    if (used_ < 2) throw std::domain_error("PathAccumulator: need at least two subsampled points");
    const double T = static_cast<double>(used_ - 1) * static_cast<double>(stride_) * h;
    return qv_ / (2.0 * T);
}

PathAccumulator2D::PathAccumulator2D(int p_max, int q_max, std::size_t stride)
    : p_max_(p_max), q_max_(q_max), stride_(stride),
      sums_(static_cast<std::size_t>((p_max + 1) * (q_max + 1)), 0.0),
      ypow_(static_cast<std::size_t>(q_max + 1)) {
    if (p_max < 0 || q_max < 0) throw std::domain_error("PathAccumulator2D: negative order");
    if (stride == 0) throw std::domain_error("PathAccumulator2D: stride must be positive");
}

void PathAccumulator2D::push(double x, double y) {
    if (seen_++ % stride_ != 0) return;
    add_mixed(sums_, ypow_, p_max_, q_max_, x, y);
    if (used_ > 0) {
        const double d = x - last_;
        qv_ += d * d;
    }
    last_ = x;
    ++used_;
}

MomentSet2D PathAccumulator2D::moments() const {
    if (used_ == 0) throw std::domain_error("PathAccumulator2D: no samples");
    return finish_moments_2d(sums_, p_max_, q_max_, used_);
}

double PathAccumulator2D::quadratic_variation_rate(double h) const {
    if (used_ < 2) throw std::domain_error("PathAccumulator2D: need at least two subsampled points");
    const double T = static_cast<double>(used_ - 1) * static_cast<double>(stride_) * h;
    return qv_ / (2.0 * T);
}

}  // namespace ipm
