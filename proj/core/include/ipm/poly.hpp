#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ipm {

/// Dense polynomial c_0 + c_1 x + ... + c_d x^d.
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}
    explicit Polynomial(std::vector<double> coeffs);

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    double operator[](std::size_t i) const { return coeffs_[i]; }

    /// Horner evaluation.
    double operator()(double x) const noexcept {
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            acc = acc * x + *it;
        }
        return acc;
    }

    bool is_zero() const noexcept;

private:
    std::vector<double> coeffs_;
};

inline double eval(const Polynomial& p, double x) noexcept { return p(x); }

/// Largest k accepted by binom().
inline constexpr unsigned kMaxBinomial = 32;
/// Largest r accepted by double_factorial().
inline constexpr int kMaxDoubleFactorial = 33;

/// Exact binomial coefficient C(k, i) from a Pascal table. Throws
/// std::domain_error when i > k or k > kMaxBinomial.
std::uint64_t binom(unsigned k, unsigned i);

/// r!! with the conventions (-1)!! = 0!! = 1. Throws std::domain_error
/// outside [-1, kMaxDoubleFactorial].
std::uint64_t double_factorial(int r);

}  // namespace ipm
