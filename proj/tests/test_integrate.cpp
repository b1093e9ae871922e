#include "sindyquad/integrate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>

using namespace sindyquad;

namespace {

// Scalar exponential growth embedded in the first state slot.
Vec6 exp_plant(const Vec6& x, const Vec2&) {
    Vec6 dx = Vec6::Zero();
    dx[0] = x[0];
    return dx;
}

}  // namespace

TEST(Rk4, MatchesClassicExponentialStep) {
    Vec6 x = Vec6::Zero();
    x[0] = 1.0;
    const Vec6 next = rk4_step(exp_plant, x, Vec2::Zero(), 0.1);
    // Classical RK4 on x' = x, one step of 0.1 from 1.0.
    EXPECT_NEAR(next[0], 1.1051708333333333, 1e-15);
}

TEST(Rk4, ZeroFieldIsExactIdentity) {
    Vec6 x;
    x << 0.1, -0.2, 0.3, 0.4, -0.5, 0.6;
    const Vec6 next = rk4_step(
        [](const Vec6&, const Vec2&) { return Vec6::Zero().eval(); }, x,
        Vec2::Zero(), 0.05);
    EXPECT_EQ(next, x);
}

TEST(Rk4, FourthOrderConvergence) {
    auto integrate = [](int n) {
        Vec6 x = Vec6::Zero();
        x[0] = 1.0;
        const double dt = 1.0 / n;
        for (int k = 0; k < n; ++k) x = rk4_step(exp_plant, x, Vec2::Zero(), dt);
        return std::abs(x[0] - std::exp(1.0));
    };
    const double order = std::log2(integrate(16) / integrate(32));
    EXPECT_GT(order, 3.8);
    EXPECT_LT(order, 4.2);
}

TEST(Rk4, NonFiniteDerivativeThrows) {
    const Vec6 x = Vec6::Zero();
    auto bad = [](const Vec6&, const Vec2&) {
        return (Vec6::Constant(std::nan(""))).eval();
    };
    EXPECT_THROW(rk4_step(bad, x, Vec2::Zero(), 0.05), numerical_error);
}

TEST(Rollout, ShapesNamesAndExactTimestamps) {
    const QuadParams p;
    const PdGains k;
    const SnapshotSet ss = rollout(case_diamond(), k, p, 0.05, 1000);
    EXPECT_EQ(ss.X.rows(), 1000);
    EXPECT_EQ(ss.X.cols(), 6);
    EXPECT_EQ(ss.U.rows(), 1000);
    EXPECT_EQ(ss.U.cols(), 2);
    EXPECT_EQ(ss.t.size(), 1000);
    EXPECT_DOUBLE_EQ(ss.dt, 0.05);
    EXPECT_EQ(ss.state_names, planar_state_names());
    EXPECT_EQ(ss.control_names, planar_control_names());
    EXPECT_FALSE(ss.has_xdot());
    for (Eigen::Index i = 0; i < ss.t.size(); ++i)
        EXPECT_EQ(ss.t[i], static_cast<double>(i) * 0.05);  // bitwise
}

TEST(Rollout, InitialRowIsUnsteppedInitialState) {
    const QuadParams p;
    const PdGains k;
    TrajectoryCase c = case_diamond_holdout();
    const SnapshotSet ss = rollout(c, k, p, 0.05, 10);
    EXPECT_EQ(ss.X.row(0).transpose(), c.x0);
}

TEST(Rollout, HoverStaysPut) {
    const QuadParams p;
    const PdGains k;
    TrajectoryCase c = case_step();
    c.target_y = 0;
    c.target_z = 0;
    const SnapshotSet ss = rollout(c, k, p, 0.05, 200);
    EXPECT_LT(ss.X.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(ss.U.col(0).maxCoeff(), p.mass * p.gravity, 1e-12);
    EXPECT_NEAR(ss.U.col(0).minCoeff(), p.mass * p.gravity, 1e-12);
}

TEST(Rollout, ConstantGravityFieldIsIntegratedNearlyExactly) {
    // RK4 is exact on polynomial solutions of degree <= 4; free fall is
    // quadratic, so only round-off shows up.
    const QuadParams p;
    const PdGains k;
    TrajectoryCase c = case_step();
    c.x0 << 0, 5.0, 0, 0, 0, 0;
    auto free_fall = [&p](const Vec6& x, const Vec2&) {
        Vec6 dx = Vec6::Zero();
        dx[0] = x[3];
        dx[1] = x[4];
        dx[2] = x[5];
        dx[4] = -p.gravity;
        return dx;
    };
    const SnapshotSet ss = rollout_with_plant(free_fall, c, k, p, 0.05, 20);
    for (Eigen::Index i = 0; i < ss.rows(); ++i) {
        const double t = ss.t[i];
        EXPECT_NEAR(ss.X(i, 1), 5.0 - 0.5 * p.gravity * t * t, 1e-8);
        EXPECT_NEAR(ss.X(i, 4), -p.gravity * t, 1e-8);
    }
}

TEST(Rollout, DivergenceNamesTheFailingStep) {
    const QuadParams p;
    const PdGains k;
    TrajectoryCase c = case_step();
    c.x0 << 1.0, 0, 0, 0, 0, 0;
    auto unstable = [](const Vec6& x, const Vec2&) { return (3.0 * x).eval(); };
    try {
        rollout_with_plant(unstable, c, k, p, 0.05, 200);
        FAIL() << "expected numerical_error";
    } catch (const numerical_error& e) {
        EXPECT_NE(std::string(e.what()).find("diverged at step"),
                  std::string::npos);
    }
}

TEST(Rollout, RejectsBadArguments) {
    const QuadParams p;
    const PdGains k;
    EXPECT_THROW(rollout(case_step(), k, p, 0.05, 1), config_error);
    EXPECT_THROW(rollout(case_step(), k, p, 0.0, 100), config_error);
    EXPECT_THROW(rollout(case_step(), k, p, -0.1, 100), config_error);
}

TEST(Noise, ZeroSigmaIsBitwiseIdentity) {
    const QuadParams p;
    const PdGains k;
    const SnapshotSet ss = rollout(case_diamond(), k, p, 0.05, 100);
    const SnapshotSet noisy = add_noise(ss, Vec::Zero(6), 123);
    EXPECT_EQ(noisy.X, ss.X);
    EXPECT_EQ(noisy.U, ss.U);
}

TEST(Noise, DeterministicPerSeedAndSelective) {
    const QuadParams p;
    const PdGains k;
    const SnapshotSet ss = rollout(case_diamond(), k, p, 0.05, 500);
    Vec sigma = Vec::Zero(6);
    sigma[1] = 1e-2;
    const SnapshotSet a = add_noise(ss, sigma, 7);
    const SnapshotSet b = add_noise(ss, sigma, 7);
    const SnapshotSet c = add_noise(ss, sigma, 8);
    EXPECT_EQ(a.X, b.X);
    EXPECT_NE(a.X, c.X);
    EXPECT_EQ(a.X.col(0), ss.X.col(0));  // untouched channel stays bitwise
    EXPECT_NE(a.X.col(1), ss.X.col(1));
}

TEST(Noise, EmpiricalSigmaNearRequested) {
    const QuadParams p;
    const PdGains k;
    const SnapshotSet ss = rollout(case_diamond(), k, p, 0.05, 2000);
    const Vec sigma = Vec::Constant(6, 1e-2);
    const SnapshotSet noisy = add_noise(ss, sigma, 99);
    for (int j = 0; j < 6; ++j) {
        const Vec diff = noisy.X.col(j) - ss.X.col(j);
        const double sd = std::sqrt(diff.squaredNorm() / diff.size());
        EXPECT_NEAR(sd, 1e-2, 1e-3);
    }
}

TEST(Noise, RejectsBadSigma) {
    const QuadParams p;
    const PdGains k;
    const SnapshotSet ss = rollout(case_diamond(), k, p, 0.05, 50);
    EXPECT_THROW(add_noise(ss, Vec::Zero(4), 0), config_error);
    Vec neg = Vec::Zero(6);
    neg[2] = -1.0;
    EXPECT_THROW(add_noise(ss, neg, 0), config_error);
}

TEST(AnalyticDerivatives, MatchPlantOnEveryRow) {
    const QuadParams p;
    const PdGains k;
    SnapshotSet ss = rollout(case_diamond(), k, p, 0.05, 100);
    fill_analytic_xdot(ss, p);
    ASSERT_TRUE(ss.has_xdot());
    for (Eigen::Index i = 0; i < ss.rows(); ++i) {
        const Vec6 x = ss.X.row(i).transpose();
        const Vec2 u = ss.U.row(i).transpose();
        EXPECT_EQ(ss.Xdot.row(i).transpose(), planar_derivative(x, u, p));
    }
}
