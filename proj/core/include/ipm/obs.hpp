#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ipm {

/// values[r] approximates (or equals) E[X^r]; values[0] == 1.
struct MomentSet {
    enum class Label { empirical, analytic };
    std::vector<double> values;
    Label label = Label::empirical;

    int r_max() const noexcept { return static_cast<int>(values.size()) - 1; }
    double operator[](int r) const { return values.at(static_cast<std::size_t>(r)); }
};

/// Mixed moments E[X^p Y^q] for p <= p_max, q <= q_max.
struct MomentSet2D {
    int p_max = 0;
    int q_max = 0;
    std::vector<double> values;  // row-major in p
    MomentSet::Label label = MomentSet::Label::empirical;

    double operator()(int p, int q) const;
    double& at(int p, int q);
    bool covers(int p, int q) const noexcept { return p >= 0 && q >= 0 && p <= p_max && q <= q_max; }
};

/// Subsampling stride delta/h. Throws std::domain_error unless delta is an
/// integer multiple of h (relative tolerance 1e-9).
std::size_t stride_for(double h, double delta);

/// Time average of X^r over the grid samples (left-endpoint Riemann sum).
MomentSet empirical_moments(std::span<const double> path, int r_max);

/// Plain average of X^r over the samples at multiples of delta.
MomentSet empirical_moments_subsampled(std::span<const double> path, double h, int r_max, double delta);

/// Sum of squared increments on the delta grid divided by 2T, T being the
/// span of the subsampled grid.
double quadratic_variation_rate(std::span<const double> path, double h, double delta);

MomentSet2D empirical_moments_2d(std::span<const double> x, std::span<const double> y, int p_max,
                                 int q_max, double h, double delta);

/// Sums entering the closed-form OU drift estimators on a subsampled path,
/// all over i = 0..I-1 with I the number of increments.
struct OuSums {
    double cross = 0.0;      // sum X_i X_{i+1}
    double square = 0.0;     // sum X_i^2
    double increment = 0.0;  // sum X_i (X_{i+1} - X_i)
    std::size_t count = 0;   // I
};

OuSums ou_sums(std::span<const double> path, double h, double delta);

/// Streaming version of the observables above, fed one grid sample at a
/// time. Produces the same values as the batch functions on the same path.
class PathAccumulator {
public:
    PathAccumulator(int r_max, std::size_t stride);

    void push(double x);

    std::size_t samples() const noexcept { return used_; }
    MomentSet moments() const;
    /// Q/(2T) with grid spacing h between pushed samples.
    double quadratic_variation_rate(double h) const;
    const OuSums& ou() const noexcept { return ou_; }

private:
    int r_max_;
    std::size_t stride_;
    std::size_t seen_ = 0;
    std::size_t used_ = 0;
    double last_ = 0.0;
    double qv_ = 0.0;
    std::vector<double> sums_;
    OuSums ou_;
};

/// Streaming mixed moments and X-component quadratic variation.
class PathAccumulator2D {
public:
    PathAccumulator2D(int p_max, int q_max, std::size_t stride);

    void push(double x, double y);

    MomentSet2D moments() const;
    double quadratic_variation_rate(double h) const;

private:
    int p_max_, q_max_;
    std::size_t stride_;
    std::size_t seen_ = 0;
    std::size_t used_ = 0;
    double last_ = 0.0;
    double qv_ = 0.0;
    std::vector<double> sums_;
    std::vector<double> ypow_;
};

}  // namespace ipm
