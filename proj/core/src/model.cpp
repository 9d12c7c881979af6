#include "ipm/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ipm {

ModelSpec::ModelSpec(int J, int K, int L, std::vector<double> upsilon, std::vector<bool> unknown_mask,
                     std::vector<TiedUnknown> ties)
    : J_(J), K_(K), L_(L), upsilon_(std::move(upsilon)), mask_(std::move(unknown_mask)),
      ties_(std::move(ties)) {
    if (J < 0 || K < 0 || L < 0) {
        throw std::invalid_argument("ModelSpec: degrees must be non-negative");
    }
    const auto n = static_cast<std::size_t>(J + K + L + 3);
    if (upsilon_.size() != n) {
        throw std::invalid_argument("ModelSpec: upsilon has length " + std::to_string(upsilon_.size()) +
                                    ", expected " + std::to_string(n));
    }
    if (mask_.size() != n) {
        throw std::invalid_argument("ModelSpec: unknown_mask has length " + std::to_string(mask_.size()) +
                                    ", expected " + std::to_string(n));
    }
    for (double v : upsilon_) {
        if (!std::isfinite(v)) throw std::invalid_argument("ModelSpec: non-finite coefficient");
    }

    std::vector<int> owner(n, -1);
    for (std::size_t t = 0; t < ties_.size(); ++t) {
        const auto& tie = ties_[t];
        if (tie.terms.empty()) throw std::invalid_argument("ModelSpec: tie '" + tie.label + "' is empty");
        const double ref = upsilon_.at(tie.terms.front().first) / tie.terms.front().second;
        for (auto [idx, w] : tie.terms) {
            if (idx >= n) throw std::invalid_argument("ModelSpec: tie index out of range");
            if (w == 0.0) throw std::invalid_argument("ModelSpec: tie weight must be nonzero");
            if (!mask_[idx]) {
                throw std::invalid_argument("ModelSpec: tied coefficient " + coefficient_label(idx) +
                                            " must be unknown");
            }
            if (owner[idx] >= 0) {
                throw std::invalid_argument("ModelSpec: coefficient " + coefficient_label(idx) +
                                            " appears in two ties");
            }
            owner[idx] = static_cast<int>(t);
            const double v = upsilon_[idx] / w;
            if (std::abs(v - ref) > 1e-12 * std::max(1.0, std::abs(ref))) {
                throw std::invalid_argument("ModelSpec: tie '" + tie.label +
                                            "' has inconsistent coefficient values");
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (!mask_[i]) continue;
        if (owner[i] < 0) {
            unknowns_.push_back({coefficient_label(i), {{i, 1.0}}});
        } else {
            const auto& tie = ties_[static_cast<std::size_t>(owner[i])];
            auto first = std::min_element(tie.terms.begin(), tie.terms.end());
            if (first->first == i) unknowns_.push_back({tie.label, tie.terms});
        }
    }
}

ModelSpec ModelSpec::from_blocks(std::vector<double> alpha, std::vector<double> gamma,
                                 std::vector<double> sigma, std::vector<bool> unknown_mask,
                                 std::vector<TiedUnknown> ties) {
    if (alpha.empty() || gamma.empty() || sigma.empty()) {
        throw std::invalid_argument("ModelSpec: every coefficient block needs at least one entry");
    }
    const int J = static_cast<int>(alpha.size()) - 1;
    const int K = static_cast<int>(gamma.size()) - 1;
    const int L = static_cast<int>(sigma.size()) - 1;
    std::vector<double> ups;
    ups.reserve(alpha.size() + gamma.size() + sigma.size());
    ups.insert(ups.end(), alpha.begin(), alpha.end());
    ups.insert(ups.end(), gamma.begin(), gamma.end());
    ups.insert(ups.end(), sigma.begin(), sigma.end());
    return ModelSpec(J, K, L, std::move(ups), std::move(unknown_mask), std::move(ties));
}

std::size_t ModelSpec::index(Block b, int degree) const {
    const int max_deg = b == Block::drift ? J_ : b == Block::interaction ? K_ : L_;
    if (degree < 0 || degree > max_deg) {
        throw std::out_of_range("ModelSpec::index: degree " + std::to_string(degree) + " out of range");
    }
    switch (b) {
        case Block::drift: return static_cast<std::size_t>(degree);
        case Block::interaction: return static_cast<std::size_t>(J_ + 1 + degree);
        case Block::diffusion: return static_cast<std::size_t>(J_ + K_ + 2 + degree);
    }
    return 0;
}

std::string ModelSpec::coefficient_label(std::size_t i) const {
    const auto j = static_cast<int>(i);
    if (j <= J_) return "alpha_" + std::to_string(j);
    if (j <= J_ + K_ + 1) return "gamma_" + std::to_string(j - J_ - 1);
    if (j < J_ + K_ + L_ + 3) return "sigma_" + std::to_string(j - J_ - K_ - 2);
    throw std::out_of_range("ModelSpec::coefficient_label: index out of range");
}

std::vector<std::string> ModelSpec::column_labels() const {
    std::vector<std::string> out;
    out.reserve(unknowns_.size());
    for (const auto& u : unknowns_) out.push_back(u.label);
    return out;
}

ModelSpec ModelSpec::with_upsilon(std::vector<double> upsilon) const {
    return ModelSpec(J_, K_, L_, std::move(upsilon), mask_, ties_);
}

Eigen::VectorXd pack_theta(const ModelSpec& spec) {
    const auto& unknowns = spec.unknowns();
    Eigen::VectorXd theta(static_cast<Eigen::Index>(unknowns.size()));
    for (std::size_t p = 0; p < unknowns.size(); ++p) {
        const auto [idx, w] = unknowns[p].terms.front();
        theta[static_cast<Eigen::Index>(p)] = spec.upsilon()[idx] / w;
    }
    return theta;
}

ModelSpec unpack_theta(const ModelSpec& spec, const Eigen::VectorXd& theta) {
    if (static_cast<std::size_t>(theta.size()) != spec.P()) {
        throw std::domain_error("unpack_theta: theta has length " + std::to_string(theta.size()) +
                                ", expected P=" + std::to_string(spec.P()));
    }
    std::vector<double> ups(spec.upsilon().begin(), spec.upsilon().end());
    const auto& unknowns = spec.unknowns();
    for (std::size_t p = 0; p < unknowns.size(); ++p) {
        for (auto [idx, w] : unknowns[p].terms) ups[idx] = theta[static_cast<Eigen::Index>(p)] * w;
    }
    return spec.with_upsilon(std::move(ups));
}

std::optional<double> validate_diffusion(const ModelSpec& spec, std::span<const double> samples) {
    const Polynomial h = spec.diffusion();
    for (double x : samples) {
        if (!(h(x) > 0.0)) return x;
    }
    return std::nullopt;
}

std::size_t SimConfig::steps() const {
    validate();
    return static_cast<std::size_t>(std::llround(T / h));
}

void SimConfig::validate() const {
    if (N < 1) throw std::invalid_argument("SimConfig: N must be at least 1");
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("SimConfig: h must be positive");
    if (!(T >= h) || !std::isfinite(T)) throw std::invalid_argument("SimConfig: T must be >= h");
    const double ratio = T / h;
    if (ratio > static_cast<double>(std::numeric_limits<std::int64_t>::max() / 2)) {
        throw std::invalid_argument("SimConfig: T/h too large");
    }
    if (std::abs(ratio - std::round(ratio)) > 1e-6) {
        throw std::invalid_argument("SimConfig: T must be an integer multiple of h");
    }
    if (init.kind == InitialCondition::Kind::gaussian && !(init.var >= 0.0)) {
        throw std::invalid_argument("SimConfig: initial variance must be non-negative");
    }
    if (!streams.empty() && streams.size() != N) {
        throw std::invalid_argument("SimConfig: streams must have one entry per particle");
    }
}

}  // namespace ipm
