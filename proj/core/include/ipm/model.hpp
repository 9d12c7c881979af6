#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ipm/poly.hpp"

namespace ipm {

enum class Block { drift, interaction, diffusion };

/// A single unknown scaling a fixed shape over several coefficients:
/// upsilon[index] = theta * weight for every term. Lets a model such as
/// f(x) = alpha * (x^3 - x) expose alpha as one column.
struct TiedUnknown {
    std::string label;
    std::vector<std::pair<std::size_t, double>> terms;  // (upsilon index, weight)
};

/// One column of the estimation problem. Untied unknowns carry a single
/// term with weight 1.
struct Unknown {
    std::string label;
    std::vector<std::pair<std::size_t, double>> terms;
};

/// Parametric model for drift f, interaction g and diffusion h.
///
/// upsilon is ordered (alpha_0..alpha_J, gamma_0..gamma_K, sigma_0..sigma_L).
/// Entries flagged in the mask are unknown; their stored values serve only
/// as ground truth when generating synthetic data. Unknowns are ordered by
/// their smallest upsilon index.
class ModelSpec {
public:
    ModelSpec(int J, int K, int L, std::vector<double> upsilon, std::vector<bool> unknown_mask,
              std::vector<TiedUnknown> ties = {});

    static ModelSpec from_blocks(std::vector<double> alpha, std::vector<double> gamma,
                                 std::vector<double> sigma, std::vector<bool> unknown_mask,
                                 std::vector<TiedUnknown> ties = {});

    int J() const noexcept { return J_; }
    int K() const noexcept { return K_; }
    int L() const noexcept { return L_; }
    std::size_t size() const noexcept { return upsilon_.size(); }
    std::size_t P() const noexcept { return unknowns_.size(); }

    std::span<const double> upsilon() const noexcept { return upsilon_; }
    const std::vector<bool>& unknown_mask() const noexcept { return mask_; }
    const std::vector<TiedUnknown>& ties() const noexcept { return ties_; }
    const std::vector<Unknown>& unknowns() const noexcept { return unknowns_; }
    bool is_unknown(std::size_t i) const { return mask_.at(i); }

    std::size_t index(Block b, int degree) const;
    /// "alpha_3", "gamma_1", "sigma_0", ...
    std::string coefficient_label(std::size_t i) const;
    std::vector<std::string> column_labels() const;

    std::span<const double> alpha() const noexcept { return std::span(upsilon_).subspan(0, J_ + 1); }
    std::span<const double> gamma() const noexcept {
        return std::span(upsilon_).subspan(J_ + 1, K_ + 1);
    }
    std::span<const double> sigma() const noexcept {
        return std::span(upsilon_).subspan(J_ + K_ + 2, L_ + 1);
    }

    Polynomial drift() const { return Polynomial({alpha().begin(), alpha().end()}); }
    Polynomial interaction() const { return Polynomial({gamma().begin(), gamma().end()}); }
    Polynomial diffusion() const { return Polynomial({sigma().begin(), sigma().end()}); }

    /// Same structure, different coefficient values.
    ModelSpec with_upsilon(std::vector<double> upsilon) const;

private:
    int J_, K_, L_;
    std::vector<double> upsilon_;
    std::vector<bool> mask_;
    std::vector<TiedUnknown> ties_;
    std::vector<Unknown> unknowns_;
};

/// Extracts theta (the unknown subvector) in column order.
Eigen::VectorXd pack_theta(const ModelSpec& spec);

/// Returns spec with the unknown entries replaced by theta. Throws
/// std::domain_error on a length mismatch.
ModelSpec unpack_theta(const ModelSpec& spec, const Eigen::VectorXd& theta);

/// First sample x with h(x; sigma) <= 0, if any.
std::optional<double> validate_diffusion(const ModelSpec& spec, std::span<const double> samples);

struct InitialCondition {
    enum class Kind { point_mass, gaussian };
    Kind kind = Kind::point_mass;
    double x0 = 0.0;
    double y0 = 0.0;   // second coordinate for two-dimensional systems
    double var = 0.0;  // per-coordinate variance for Kind::gaussian

    static InitialCondition point(double x, double y = 0.0) { return {Kind::point_mass, x, y, 0.0}; }
    static InitialCondition normal(double mean, double var, double mean_y = 0.0) {
        return {Kind::gaussian, mean, mean_y, var};
    }
};

struct SimConfig {
    std::size_t N = 250;
    double T = 1.0e4;
    double h = 0.005;
    std::uint64_t seed = 0;
    InitialCondition init{};
    /// Optional per-particle RNG stream ids (default: particle index).
    std::vector<std::uint64_t> streams{};

    /// Number of Euler steps T/h; validates the configuration.
    std::size_t steps() const;
    void validate() const;
    std::uint64_t stream_id(std::size_t n) const { return streams.empty() ? n : streams[n]; }
};

/// Parameters of the two-dimensional FitzHugh-Nagumo system.
struct FhnParams {
    double gamma = 0.5;
    double sigma = 1.0;
    double a = 2.0;
};

}  // namespace ipm
