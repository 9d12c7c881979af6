#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ipm/mom_est.hpp"
#include "ipm/sim.hpp"
#include "ipm/trajectory_io.hpp"
#include "oracles.hpp"

namespace {

using ipm::ModelSpec;
using ipm::SimConfig;

std::vector<double> power_sums(const std::vector<double>& xs, int K) {
    std::vector<double> s(static_cast<std::size_t>(K) + 1, 0.0);
    for (double x : xs) {
        for (int p = 0; p <= K; ++p) s[static_cast<std::size_t>(p)] += std::pow(x, p);
    }
    return s;
}

TEST(Interaction, ZeroGamma) {
    const std::vector<double> gamma{0.0, 0.0, 0.0};
    const std::vector<double> sums{3.0, 1.0, 7.0};
    EXPECT_EQ(ipm::interaction_mean(1.3, sums, 3, gamma), 0.0);
}

TEST(Interaction, LinearMatchesDoubleLoop) {
    const std::vector<double> gamma{0.0, -1.0};
    const std::vector<double> xs{1.0, 2.0, 3.0};
    const double v = ipm::interaction_mean(2.0, power_sums(xs, 1), 3, gamma);
    EXPECT_DOUBLE_EQ(v, ipm::testing::naive_interaction(gamma, xs, 2.0));
    EXPECT_EQ(v, 0.0);
}

TEST(Interaction, QuadraticMatchesDoubleLoop) {
    const std::vector<double> gamma{0.0, 0.0, 1.0};
    const std::vector<double> xs{1.0, -1.0};
    const double v = ipm::interaction_mean(0.0, power_sums(xs, 2), 2, gamma);
    EXPECT_DOUBLE_EQ(v, ipm::testing::naive_interaction(gamma, xs, 0.0));
    EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Simulate, NoDynamicsKeepsInitialPoint) {
    const ModelSpec s = ModelSpec::from_blocks({0.0}, {0.0}, {0.0}, {true, false, false});
    SimConfig c;
    c.N = 5;
    c.T = 1.0;
    c.init = ipm::InitialCondition::point(1.0);
    const auto traj = ipm::simulate_ips(s, c);
    for (double v : traj.data) EXPECT_EQ(v, 1.0);
}

TEST(Simulate, MatchesReferenceIntegratorN2) {
    const ModelSpec s = ipm::ou_model();
    SimConfig c;
    c.N = 2;
    c.T = 3 * c.h;
    c.seed = 42;
    c.init = ipm::InitialCondition::normal(0.0, 1.0);
    const auto traj = ipm::simulate_ips(s, c);
    const auto ref = ipm::testing::reference_ips(s, c);
    ASSERT_EQ(traj.steps, 3u);
    for (std::size_t n = 0; n < 2; ++n) {
        for (std::size_t t = 0; t <= 3; ++t) {
            EXPECT_NEAR(traj.path(0, n)[t], ref[n][t], 1e-12 * std::max(1.0, std::abs(ref[n][t])));
        }
    }
}

TEST(Simulate, FhnFixedPoint) {
    SimConfig c;
    c.N = 3;
    c.T = 1.0;
    const auto traj = ipm::simulate_fhn(0.0, 0.0, 0.0, c);
    EXPECT_EQ(traj.dims, 2);
    for (double v : traj.data) EXPECT_EQ(v, 0.0);
}

TEST(Simulate, FhnMatchesReferenceIntegratorN2) {
    SimConfig c;
    c.N = 2;
    c.T = 3 * c.h;
    c.seed = 9;
    c.init = ipm::InitialCondition::point(0.3, -0.2);
    const ipm::FhnParams p{0.5, 1.0, 2.0};
    const auto traj = ipm::simulate_fhn(p.gamma, p.sigma, p.a, c);
    const auto ref = ipm::testing::reference_fhn(p, c);
    for (int d = 0; d < 2; ++d) {
        for (std::size_t n = 0; n < 2; ++n) {
            for (std::size_t t = 0; t <= 3; ++t) {
                const double r = ref[static_cast<std::size_t>(d)][n][t];
                EXPECT_NEAR(traj.path(d, n)[t], r, 1e-12 * std::max(1.0, std::abs(r)));
            }
        }
    }
}

TEST(Simulate, NegativeDiffusionReported) {
    const ModelSpec s = ModelSpec::from_blocks({0.0}, {0.0}, {-1.0}, {true, false, false});
    SimConfig c;
    c.N = 1;
    c.T = 1.0;
    try {
        ipm::simulate_ips(s, c);
        FAIL() << "expected SimulationError";
    } catch (const ipm::SimulationError& e) {
        EXPECT_NE(std::string(e.what()).find("diffusion nonpositive at x=0"), std::string::npos);
        EXPECT_EQ(e.step(), 1u);
    }
}

TEST(Simulate, BlowUpReportsStep) {
    const ModelSpec s = ModelSpec::from_blocks({0.0, 0.0, 0.0, 0.0, 0.0, 10.0}, {0.0}, {0.0},
                                               {true, false, false, false, false, false, false, false});
    SimConfig c;
    c.N = 1;
    c.T = 10.0;
    c.h = 0.1;
    c.init = ipm::InitialCondition::point(3.0);
    try {
        ipm::simulate_ips(s, c);
        FAIL() << "expected SimulationError";
    } catch (const ipm::SimulationError& e) {
        EXPECT_NE(std::string(e.what()).find("blow-up at step"), std::string::npos);
        EXPECT_GT(e.step(), 0u);
        EXPECT_LE(e.step(), 100u);
    }
}

TEST(Simulate, ObserverSeesEveryStep) {
    SimConfig c;
    c.N = 4;
    c.T = 0.05;
    std::size_t calls = 0, last = 0;
    ipm::run_ips(ipm::ou_model(), c, [&](std::size_t s, std::span<const double> x, std::span<const double> y) {
        EXPECT_EQ(s, calls);
        EXPECT_EQ(x.size(), 4u);
        EXPECT_TRUE(y.empty());
        ++calls;
        last = s;
    });
    EXPECT_EQ(calls, 11u);
    EXPECT_EQ(last, 10u);
}

TEST(TrajectoryIo, BinaryRoundTrip) {
    SimConfig c;
    c.N = 3;
    c.T = 0.1;
    c.seed = 5;
    const auto traj = ipm::simulate_fhn(0.5, 1.0, 2.0, c);
    std::stringstream ss;
    ipm::write_trajectory(ss, traj);
    const auto back = ipm::read_trajectory(ss);
    EXPECT_EQ(back.dims, 2);
    EXPECT_EQ(back.N, 3u);
    EXPECT_EQ(back.steps, traj.steps);
    EXPECT_EQ(back.h, traj.h);
    EXPECT_EQ(back.data, traj.data);
}

TEST(TrajectoryIo, HeaderLayout) {
    ipm::Trajectory t;
    t.dims = 1;
    t.N = 1;
    t.h = 0.5;
    t.steps = 1;
    t.data = {1.0, 2.0};
    std::stringstream ss;
    ipm::write_trajectory(ss, t);
    const std::string bytes = ss.str();
    ASSERT_EQ(bytes.size(), 4u + 4 + 1 + 8 + 8 + 8 + 2 * 8);
    EXPECT_EQ(bytes.substr(0, 4), "IPMS");
    EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 1u);
    EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 1u);
    EXPECT_EQ(static_cast<unsigned char>(bytes[9]), 1u);
}

TEST(TrajectoryIo, RejectsBadMagic) {
    std::stringstream ss("XXXX0000000000000000000000000000000");
    EXPECT_THROW(ipm::read_trajectory(ss), std::runtime_error);
}

TEST(TrajectoryIo, CsvHeader) {
    SimConfig c;
    c.N = 2;
    c.T = 0.01;
    const auto traj = ipm::simulate_ips(ipm::ou_model(), c);
    const auto file = std::filesystem::temp_directory_path() / "ipm_traj_test.csv";
    ipm::write_trajectory_csv(file, traj);
    std::ifstream is(file);
    std::string header;
    std::getline(is, header);
    EXPECT_EQ(header, "t,x_0,x_1");
    std::size_t rows = 0;
    for (std::string line; std::getline(is, line);) ++rows;
    EXPECT_EQ(rows, 3u);
    std::filesystem::remove(file);
}

}  // namespace
