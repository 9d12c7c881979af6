#include "ipm/poly.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace ipm {

namespace {

using PascalTable = std::array<std::array<std::uint64_t, kMaxBinomial + 1>, kMaxBinomial + 1>;

constexpr PascalTable make_pascal() {
    PascalTable t{};
    for (unsigned k = 0; k <= kMaxBinomial; ++k) {
        t[k][0] = 1;
        t[k][k] = 1;
        for (unsigned i = 1; i < k; ++i) {
            t[k][i] = t[k - 1][i - 1] + t[k - 1][i];
        }
    }
    return t;
}

constexpr PascalTable kPascal = make_pascal();

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) {
        throw std::invalid_argument("Polynomial: coefficient vector must be non-empty");
    }
}

bool Polynomial::is_zero() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

std::uint64_t binom(unsigned k, unsigned i) {
    if (k > kMaxBinomial) {
        throw std::domain_error("binom: k=" + std::to_string(k) + " exceeds " +
                                std::to_string(kMaxBinomial));
    }
    if (i > k) {
        throw std::domain_error("binom: i=" + std::to_string(i) + " > k=" + std::to_string(k));
    }
    return kPascal[k][i];
}

std::uint64_t double_factorial(int r) {
    if (r < -1 || r > kMaxDoubleFactorial) {
        throw std::domain_error("double_factorial: r=" + std::to_string(r) + " out of range");
    }
    std::uint64_t acc = 1;
    for (int v = r; v > 1; v -= 2) {
        acc *= static_cast<std::uint64_t>(v);
    }
    return acc;
}

}  // namespace ipm
