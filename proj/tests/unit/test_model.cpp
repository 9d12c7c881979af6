#include <gtest/gtest.h>

#include <vector>

#include "ipm/config.hpp"
#include "ipm/model.hpp"
#include "ipm/mom_est.hpp"

namespace {

using ipm::ModelSpec;

ModelSpec ou_spec() {
    return ModelSpec(1, 1, 0, {0.0, -1.0, 0.0, -1.0, 1.0}, {false, true, false, false, true});
}

TEST(Model, PackOu) {
    const Eigen::VectorXd t = ipm::pack_theta(ou_spec());
    ASSERT_EQ(t.size(), 2);
    EXPECT_EQ(t[0], -1.0);
    EXPECT_EQ(t[1], 1.0);
    EXPECT_EQ(ou_spec().column_labels(), (std::vector<std::string>{"alpha_1", "sigma_0"}));
}

TEST(Model, PackAllUnknownIsIdentity) {
    const std::vector<double> v{0.3, -1.0, 2.0, 0.0, -0.5, 1.0, 0.25};
    const ModelSpec s(1, 2, 1, v, std::vector<bool>(v.size(), true));
    const Eigen::VectorXd t = ipm::pack_theta(s);
    ASSERT_EQ(static_cast<std::size_t>(t.size()), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(t[static_cast<Eigen::Index>(i)], v[i]);
}

TEST(Model, PackMultiplicativeDiffusion) {
    const ModelSpec s = ModelSpec::from_blocks({0.0, -1.0}, {0.0, -1.0}, {1.0, 0.0, 0.5},
                                               {false, false, false, false, true, false, true});
    const Eigen::VectorXd t = ipm::pack_theta(s);
    ASSERT_EQ(t.size(), 2);
    EXPECT_EQ(t[0], 1.0);
    EXPECT_EQ(t[1], 0.5);
}

TEST(Model, UnpackRoundTrip) {
    const ModelSpec s = ou_spec();
    const ModelSpec r = ipm::unpack_theta(s, ipm::pack_theta(s));
    EXPECT_TRUE(std::equal(s.upsilon().begin(), s.upsilon().end(), r.upsilon().begin(), r.upsilon().end()));
}

TEST(Model, UnpackSubstitutesOnlyUnknowns) {
    Eigen::VectorXd t(2);
    t << -2.0, 3.0;
    const ModelSpec r = ipm::unpack_theta(ou_spec(), t);
    EXPECT_EQ(r.alpha()[1], -2.0);
    EXPECT_EQ(r.sigma()[0], 3.0);
    EXPECT_EQ(r.gamma()[1], -1.0);
    EXPECT_EQ(r.alpha()[0], 0.0);
}

TEST(Model, UnpackZeroIntoAllUnknown) {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const ModelSpec s(1, 0, 0, v, std::vector<bool>(4, true));
    const ModelSpec r = ipm::unpack_theta(s, Eigen::VectorXd::Zero(4));
    for (double x : r.upsilon()) EXPECT_EQ(x, 0.0);
}

TEST(Model, UnpackLengthMismatch) {
    EXPECT_THROW(ipm::unpack_theta(ou_spec(), Eigen::VectorXd::Zero(3)), std::domain_error);
}

TEST(Model, ValidateDiffusionPositiveConstant) {
    const std::vector<double> xs{-100.0, 0.0, 3.0};
    EXPECT_FALSE(ipm::validate_diffusion(ou_spec(), xs).has_value());
}

TEST(Model, ValidateDiffusionMultiplicativeGrid) {
    const ModelSpec s = ipm::multiplicative_model();
    std::vector<double> grid;
    double lowest = 1e300;
    for (int i = 0; i <= 1000; ++i) {
        const double x = -5.0 + 0.01 * i;
        grid.push_back(x);
        lowest = std::min(lowest, 1.0 + 0.5 * x * x);
    }
    EXPECT_DOUBLE_EQ(lowest, 1.0);
    EXPECT_FALSE(ipm::validate_diffusion(s, grid).has_value());
}

TEST(Model, ValidateDiffusionViolation) {
    const ModelSpec s = ModelSpec::from_blocks({0.0}, {0.0}, {-1.0}, {true, false, false});
    const std::vector<double> xs{0.0};
    const auto v = ipm::validate_diffusion(s, xs);
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(*v, 0.0);
}

TEST(Model, RejectsBadLengths) {
    EXPECT_THROW(ModelSpec(1, 1, 0, {0.0, 1.0}, {true, true}), std::invalid_argument);
    EXPECT_THROW(ModelSpec(0, 0, 0, {0.0, 1.0, 1.0}, {true, true}), std::invalid_argument);
}

TEST(Model, LabelsAndIndices) {
    const ModelSpec s = ipm::multiplicative_model();
    EXPECT_EQ(s.index(ipm::Block::diffusion, 2), s.size() - 1);
    EXPECT_EQ(s.coefficient_label(s.index(ipm::Block::interaction, 1)), "gamma_1");
    EXPECT_THROW(s.index(ipm::Block::drift, 5), std::out_of_range);
}

TEST(Model, TiedUnknownIsOneColumn) {
    const ModelSpec s = ipm::bistable_drift_model();
    EXPECT_EQ(s.P(), 3u);
    EXPECT_EQ(s.column_labels(), (std::vector<std::string>{"alpha", "gamma_1", "sigma_0"}));
    const Eigen::VectorXd t = ipm::pack_theta(s);
    EXPECT_EQ(t[0], -1.0);
    Eigen::VectorXd u = t;
    u[0] = 2.0;
    const ModelSpec r = ipm::unpack_theta(s, u);
    EXPECT_EQ(r.alpha()[1], -2.0);
    EXPECT_EQ(r.alpha()[3], 2.0);
}

TEST(Model, InconsistentTieRejected) {
    ipm::TiedUnknown tie{"a", {{1, -1.0}, {3, 1.0}}};
    EXPECT_THROW(ModelSpec::from_blocks({0.0, 1.0, 0.0, 1.0}, {0.0}, {1.0},
                                        {false, true, false, true, false, false}, {tie}),
                 std::invalid_argument);
}

TEST(SimConfig, Validation) {
    ipm::SimConfig c;
    c.N = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.h = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.T = 0.001;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.T = 1.0;
    EXPECT_EQ(c.steps(), 200u);
}

}  // namespace
