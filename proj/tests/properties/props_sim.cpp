#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "ipm/config.hpp"
#include "ipm/sim.hpp"
#include "oracles.hpp"

namespace {

// Random model with h > 0 everywhere: positive constant plus nonnegative
// even powers.
ipm::ModelSpec random_model(std::mt19937_64& rng, int max_deg) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_real_distribution<double> val(-1.0, 1.0), pos(0.2, 1.0);
    const int J = deg(rng), K = deg(rng), L = deg(rng);
    std::vector<double> alpha(static_cast<std::size_t>(J) + 1), gamma(static_cast<std::size_t>(K) + 1),
        sigma(static_cast<std::size_t>(L) + 1, 0.0);
    for (double& a : alpha) a = val(rng);
    for (double& g : gamma) g = val(rng);
    sigma[0] = pos(rng);
    for (std::size_t l = 2; l < sigma.size(); l += 2) sigma[l] = 0.5 * pos(rng);
    std::vector<bool> mask(alpha.size() + gamma.size() + sigma.size(), false);
    mask[0] = true;
    return ipm::ModelSpec::from_blocks(alpha, gamma, sigma, mask);
}

void expect_matches_reference(const ipm::ModelSpec& s, const ipm::SimConfig& c) {
    const auto cmp = ipm::testing::compare_with_reference(s, c);
    EXPECT_LE(cmp.max_scaled, 1e-10);
    EXPECT_GT(cmp.compared, 0u);
    EXPECT_TRUE(cmp.reference_agrees);
}

TEST(SimProperty, PowerSumsMatchPairwiseInteraction) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<std::size_t> nd(1, 50);
    for (int trial = 0; trial < 60; ++trial) {
        const auto s = random_model(rng, 4);
        ipm::SimConfig c;
        c.N = nd(rng);
        c.T = 20 * c.h;
        c.seed = rng();
        c.init = ipm::InitialCondition::normal(0.0, 0.5);
        expect_matches_reference(s, c);
    }
}

TEST(SimProperty, Deterministic) {
    ipm::SimConfig c;
    c.N = 17;
    c.T = 2.0;
    c.seed = 99;
    c.init = ipm::InitialCondition::normal(0.1, 0.3);
    const auto s = ipm::bistable_interaction_model();
    EXPECT_EQ(ipm::simulate_ips(s, c).data, ipm::simulate_ips(s, c).data);
    EXPECT_EQ(ipm::simulate_fhn(0.5, 1.0, 2.0, c).data, ipm::simulate_fhn(0.5, 1.0, 2.0, c).data);
}

TEST(SimProperty, PermutationEquivariance) {
    ipm::SimConfig a;
    a.N = 12;
    a.T = 0.5;
    a.seed = 5;
    a.init = ipm::InitialCondition::normal(0.0, 1.0);
    std::vector<std::uint64_t> perm(a.N);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(3);
    std::shuffle(perm.begin(), perm.end(), rng);
    ipm::SimConfig b = a;
    b.streams = perm;
    const auto s = ipm::ModelSpec::from_blocks({0.0, 0.5, 0.0, -1.0}, {0.0, -1.0, 0.0, 0.2}, {1.0, 0.0, 0.3},
                                               std::vector<bool>(11, true));
    const auto ta = ipm::simulate_ips(s, a);
    const auto tb = ipm::simulate_ips(s, b);
    for (std::size_t n = 0; n < a.N; ++n) {
        const auto pa = ta.path(0, perm[n]);
        const auto pb = tb.path(0, n);
        for (std::size_t t = 0; t < pa.size(); ++t) {
            EXPECT_NEAR(pb[t], pa[t], 1e-10 * std::max(1.0, std::abs(pa[t])));
        }
    }
}

TEST(SimProperty, ParticleStreamIndependentOfN) {
    // Without interaction a particle's path depends only on its stream.
    const auto s = ipm::ModelSpec::from_blocks({0.0, -1.0}, {0.0}, {1.0}, {true, true, false, false});
    ipm::SimConfig c;
    c.T = 1.0;
    c.seed = 8;
    c.N = 3;
    const auto small = ipm::simulate_ips(s, c);
    c.N = 40;
    const auto large = ipm::simulate_ips(s, c);
    for (std::size_t n = 0; n < 3; ++n) {
        EXPECT_TRUE(std::equal(small.path(0, n).begin(), small.path(0, n).end(), large.path(0, n).begin()));
    }
}

}  // namespace
