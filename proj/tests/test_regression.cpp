#include "sindyquad/regression.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace sindyquad;

namespace {

// Columns [1, x, x^2] sampled along x(t) = exp(-2t); the target x_dot = -2x
// is exactly representable by the middle column alone.
struct ExpProblem {
    Mat theta;
    Mat xdot;

    ExpProblem() {
        const int m = 200;
        theta.resize(m, 3);
        xdot.resize(m, 1);
        for (int i = 0; i < m; ++i) {
            const double x = std::exp(-2.0 * (2.0 * i / (m - 1)));
            theta(i, 0) = 1.0;
            theta(i, 1) = x;
            theta(i, 2) = x * x;
            xdot(i, 0) = -2.0 * x;
        }
    }
};

}  // namespace

TEST(Lstsq, ExactAndMinimumNorm) {
    Mat a(3, 2);
    a << 1, 0, 0, 1, 0, 0;
    Vec b(3);
    b << 2, 3, 0;
    EXPECT_LT((lstsq(a, b) - Vec2(2, 3)).norm(), 1e-12);

    // Duplicated column: the minimum-norm solution splits the coefficient.
    Mat dup(3, 2);
    dup.col(0) = Vec3(1, 2, 3);
    dup.col(1) = Vec3(1, 2, 3);
    Eigen::Index rank = 0;
    const Vec w = lstsq(dup, (2.0 * Vec3(1, 2, 3)).eval(), &rank);
    EXPECT_EQ(rank, 1);
    EXPECT_LT((w - Vec2(1, 1)).norm(), 1e-12);
}

TEST(Stlsq, RecoversSparseTruth) {
    const ExpProblem p;
    const Mat w = stlsq(p.theta, p.xdot, 0.5);
    EXPECT_NEAR(w(0, 0), 0.0, 1e-8);
    EXPECT_NEAR(w(1, 0), -2.0, 1e-8);
    EXPECT_NEAR(w(2, 0), 0.0, 1e-8);
}

TEST(Sr3, RecoversSparseTruth) {
    const ExpProblem p;
    const Mat w = sr3(p.theta, p.xdot, 0.5);
    EXPECT_NEAR(w(0, 0), 0.0, 1e-6);
    EXPECT_NEAR(w(1, 0), -2.0, 1e-6);
    EXPECT_NEAR(w(2, 0), 0.0, 1e-6);
}

TEST(Stlsq, ZeroLambdaIsPlainLeastSquares) {
    ExpProblem p;
    p.xdot = p.theta * Vec3(1.0, 1.0, -0.5);
    const Mat w = stlsq(p.theta, p.xdot, 0.0);
    EXPECT_LT((w.col(0) - Vec3(1.0, 1.0, -0.5)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Sr3, LargeKappaZeroLambdaApproachesLeastSquares) {
    ExpProblem p;
    p.xdot = p.theta * Vec3(1.0, 1.0, -0.5);
    const Mat w = sr3(p.theta, p.xdot, 0.0, 1e8);
    EXPECT_LT((w.col(0) - Vec3(1.0, 1.0, -0.5)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Stlsq, OverLargeLambdaEmptiesTheModelWithWarning) {
    const ExpProblem p;
    RegressionInfo info;
    const Mat w = stlsq(p.theta, p.xdot, 5.0, {}, &info);
    EXPECT_EQ(w.cwiseAbs().maxCoeff(), 0.0);
    ASSERT_FALSE(info.warnings.empty());
    EXPECT_NE(info.warnings.back().find("thresholded away"), std::string::npos);
}

TEST(Sr3, OverLargeLambdaEmptiesTheModel) {
    const ExpProblem p;
    const Mat w = sr3(p.theta, p.xdot, 5.0);
    EXPECT_EQ(w.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Regression, OnSupportNormalEquationsHold) {
    const ExpProblem p;
    for (const Mat& w :
         {stlsq(p.theta, p.xdot, 0.5), sr3(p.theta, p.xdot, 0.5)}) {
        const Vec residual = p.xdot.col(0) - p.theta * w.col(0);
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            if (w(i, 0) != 0.0)
                EXPECT_NEAR(p.theta.col(i).dot(residual), 0.0, 1e-8);
    }
}

TEST(Regression, MultipleTargetsFitIndependently) {
    ExpProblem p;
    Mat xdot(p.theta.rows(), 2);
    xdot.col(0) = p.xdot.col(0);
    xdot.col(1) = 3.0 * Vec::Ones(p.theta.rows());
    const Mat w = stlsq(p.theta, xdot, 0.5);
    EXPECT_NEAR(w(1, 0), -2.0, 1e-8);
    EXPECT_NEAR(w(0, 1), 3.0, 1e-8);
    EXPECT_NEAR(w(1, 1), 0.0, 1e-8);
    EXPECT_NEAR(w(2, 1), 0.0, 1e-8);
}

TEST(Regression, RowShuffleInvariance) {
    const ExpProblem p;
    std::vector<Eigen::Index> perm(static_cast<size_t>(p.theta.rows()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937(31));
    Mat theta_s(p.theta.rows(), p.theta.cols());
    Mat xdot_s(p.xdot.rows(), p.xdot.cols());
    for (size_t i = 0; i < perm.size(); ++i) {
        theta_s.row(static_cast<Eigen::Index>(i)) = p.theta.row(perm[i]);
        xdot_s.row(static_cast<Eigen::Index>(i)) = p.xdot.row(perm[i]);
    }
    const Mat a = stlsq(p.theta, p.xdot, 0.5);
    const Mat b = stlsq(theta_s, xdot_s, 0.5);
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Regression, NoisyTargetStillRecoversSupport) {
    ExpProblem p;
    std::mt19937 rng(13);
    std::normal_distribution<double> gauss(0.0, 1e-3);
    for (Eigen::Index i = 0; i < p.xdot.rows(); ++i) p.xdot(i, 0) += gauss(rng);
    const Mat w = sr3(p.theta, p.xdot, 0.5);
    EXPECT_EQ(w(0, 0), 0.0);
    EXPECT_EQ(w(2, 0), 0.0);
    EXPECT_NEAR(w(1, 0), -2.0, 1e-2);
}

TEST(Prune, DropsTermsCheaperThanLambda) {
    const ExpProblem p;
    Mat w(3, 1);
    w << 1e-6, -2.0, 0.0;  // a stray bias that explains essentially nothing
    const Mat pruned = l0_prune(p.theta, p.xdot, w, 0.1);
    EXPECT_EQ(pruned(0, 0), 0.0);
    EXPECT_NEAR(pruned(1, 0), -2.0, 1e-10);
}

TEST(Prune, KeepsTermsWorthTheirCost) {
    ExpProblem p;
    p.xdot = p.theta * Vec3(1.0, -2.0, 0.0);
    Mat w(3, 1);
    w << 1.0, -2.0, 0.0;
    const Mat pruned = l0_prune(p.theta, p.xdot, w, 0.1);
    EXPECT_NEAR(pruned(0, 0), 1.0, 1e-10);
    EXPECT_NEAR(pruned(1, 0), -2.0, 1e-10);
}

TEST(Regression, UnderdeterminedWarnsAndBadArgsThrow) {
    const Mat theta = Mat::Random(5, 10);
    const Mat xdot = Mat::Random(5, 1);
    RegressionInfo info;
    stlsq(theta, xdot, 0.1, {}, &info);
    ASSERT_FALSE(info.warnings.empty());
    EXPECT_NE(info.warnings.front().find("fewer samples"), std::string::npos);

    const ExpProblem p;
    EXPECT_THROW(stlsq(p.theta, p.xdot, -0.1), config_error);
    EXPECT_THROW(sr3(p.theta, p.xdot, -0.1), config_error);
    EXPECT_THROW(sr3(p.theta, p.xdot, 0.1, 0.0), config_error);
}

TEST(Sr3, ReportsNonConvergenceWithinTinyBudget) {
    const ExpProblem p;
    Sr3Options o;
    o.iters = 1;
    o.tol = 1e-16;
    o.hard = false;
    RegressionInfo info;
    sr3(p.theta, p.xdot, 0.3, 1.0, o, &info);
    EXPECT_FALSE(info.converged);
    ASSERT_FALSE(info.warnings.empty());
    EXPECT_NE(info.warnings.front().find("did not converge"), std::string::npos);
}
