#include "ipm/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace ipm {

double mle_ou(const OuSums& sums, double delta) {
    if (sums.count < 1) throw std::domain_error("mle_ou: need at least two subsampled points");
    const double denom = delta * sums.square;
    if (denom == 0.0) throw std::domain_error("mle_ou: zero denominator");
    return 1.0 + sums.increment / denom;
}

double mle_ou(std::span<const double> path, double h, double delta) {
    return mle_ou(ou_sums(path, h, delta), delta);
}

double eigenfn_ou(const OuSums& sums, double delta) {
    if (sums.count < 1) throw std::domain_error("eigenfn_ou: need at least two subsampled points");
    if (sums.square == 0.0) throw std::domain_error("eigenfn_ou: zero denominator");
    // sum X_i X_{i+1} / sum X_i^2, formed from the increment sum to avoid
    // the cancellation in cross - square.
    const double ratio = 1.0 + sums.increment / sums.square;
    if (!(ratio > 0.0)) throw std::domain_error("eigenfunction ratio nonpositive");
    return 1.0 + std::log(ratio) / delta;
}

double eigenfn_ou(std::span<const double> path, double h, double delta) {
    return eigenfn_ou(ou_sums(path, h, delta), delta);
}

}  // namespace ipm
