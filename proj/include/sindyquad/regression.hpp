#pragma once

#include "sindyquad/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace sindyquad {

// Minimum-norm least squares via complete orthogonal decomposition, so
// rank-deficient systems still get a well-defined answer.
inline Vec lstsq(const Mat& a, const Vec& b, Eigen::Index* rank = nullptr) {
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(a);
    if (rank) *rank = cod.rank();
    return cod.solve(b);
}

struct RegressionInfo {
    std::vector<std::string> warnings;
    bool converged = true;
};

struct StlsqOptions {
    int iters = 20;
    // Small ridge inside the thresholding iterations keeps the active-set
    // solves well-posed when the library carries near-collinear columns
    // (sin(phi) vs phi, u1 vs u1*cos(phi), ...). It must stay far below the
    // threshold grid so coefficient magnitudes are effectively the
    // least-squares ones; the returned support is always refit without it.
    double ridge = 1e-4;
    bool prune = true;
};

struct Sr3Options {
    int iters = 5000;
    double tol = 1e-10;
    bool hard = true;  // hard threshold (l0 flavor); false = soft (l1)
    bool prune = true;
};

namespace detail {

inline Vec ols_on_support(const Mat& theta, const Vec& b,
                          const std::vector<Eigen::Index>& act,
                          RegressionInfo* info = nullptr) {
    Vec w = Vec::Zero(theta.cols());
    if (act.empty()) return w;
    Mat sub(theta.rows(), static_cast<Eigen::Index>(act.size()));
    for (size_t i = 0; i < act.size(); ++i) sub.col(i) = theta.col(act[i]);
    Eigen::Index rank = 0;
    const Vec ws = lstsq(sub, b, &rank);
    if (info && rank < sub.cols())
        info->warnings.push_back(
            "rank-deficient active set (rank " + std::to_string(rank) + " of " +
            std::to_string(sub.cols()) + "); using minimum-norm solution");
    for (size_t i = 0; i < act.size(); ++i) w[act[i]] = ws[i];
    return w;
}

inline std::vector<Eigen::Index> support_of(const Vec& w) {
    std::vector<Eigen::Index> act;
    for (Eigen::Index i = 0; i < w.size(); ++i)
        if (w[i] != 0.0) act.push_back(i);
    return act;
}

// Sequentially thresholded least squares for one target column, without the
// final refit: alternate a ridge-stabilized solve on the active set with
// hard-thresholding of small coefficients until the support stops changing.
inline std::vector<Eigen::Index> stlsq_support(const Mat& theta, const Mat& gram,
                                               const Vec& thetat_b,
                                               double lambda,
                                               const StlsqOptions& o) {
    const Eigen::Index p = theta.cols();
    std::vector<bool> act(static_cast<size_t>(p), true);
    for (int it = 0; it < o.iters; ++it) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index i = 0; i < p; ++i)
            if (act[static_cast<size_t>(i)]) idx.push_back(i);
        if (idx.empty()) break;

        Mat a(idx.size(), idx.size());
        Vec rhs(idx.size());
        for (size_t r = 0; r < idx.size(); ++r) {
            rhs[static_cast<Eigen::Index>(r)] = thetat_b[idx[r]];
            for (size_t c = 0; c < idx.size(); ++c)
                a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    gram(idx[r], idx[c]);
        }
        a.diagonal().array() += o.ridge;
        const Vec w = a.ldlt().solve(rhs);

        std::vector<bool> next(static_cast<size_t>(p), false);
        bool any = false;
        for (size_t r = 0; r < idx.size(); ++r)
            if (std::abs(w[static_cast<Eigen::Index>(r)]) >= lambda) {
                next[static_cast<size_t>(idx[r])] = true;
                any = true;
            }
        const bool stable = (next == act);
        act = next;
        if (stable || !any) break;
    }
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; i < p; ++i)
        if (act[static_cast<size_t>(i)]) out.push_back(i);
    return out;
}

}  // namespace detail

// Greedy backward elimination on an existing support: repeatedly drop the
// term whose removal costs least in 0.5*||residual||^2 while that cost stays
// below lambda, refitting by least squares after each drop. This is the
// natural cleanup for the l0-penalized objective 0.5*RSS + lambda*||w||_0:
// a term earns its place only if deleting it costs more than lambda.
inline Mat l0_prune(const Mat& theta, const Mat& xdot, Mat w, double lambda) {
    if (!(lambda > 0)) return w;
    for (Eigen::Index j = 0; j < xdot.cols(); ++j) {
        std::vector<Eigen::Index> act = detail::support_of(w.col(j));
        if (act.empty()) continue;
        const Vec b = xdot.col(j);

        auto rss = [&](const std::vector<Eigen::Index>& cols) {
            if (cols.empty()) return b.squaredNorm();
            Mat sub(theta.rows(), static_cast<Eigen::Index>(cols.size()));
            for (size_t i = 0; i < cols.size(); ++i)
                sub.col(i) = theta.col(cols[i]);
            return (b - sub * lstsq(sub, b)).squaredNorm();
        };

        double cur = rss(act);
        while (!act.empty()) {
            double best_cost = 0;
            size_t best_i = 0;
            bool first = true;
            for (size_t i = 0; i < act.size(); ++i) {
                std::vector<Eigen::Index> trial = act;
                trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
                const double cost = rss(trial) - cur;
                if (first || cost < best_cost) {
                    best_cost = cost;
                    best_i = i;
                    first = false;
                }
            }
            if (0.5 * best_cost >= lambda) break;
            act.erase(act.begin() + static_cast<std::ptrdiff_t>(best_i));
            cur += best_cost;
        }
        w.col(j) = detail::ols_on_support(theta, b, act);
    }
    return w;
}

// Sequentially thresholded least squares (one threshold pass per target
// column), followed by an unregularized least-squares refit on the final
// support and, for lambda > 0, the greedy l0 prune.
inline Mat stlsq(const Mat& theta, const Mat& xdot, double lambda,
                 const StlsqOptions& o = {}, RegressionInfo* info = nullptr) {
    if (lambda < 0) throw config_error("stlsq threshold must be >= 0");
    if (info && theta.rows() < theta.cols())
        info->warnings.push_back(
            "fewer samples than library columns; fit is underdetermined");

    const Mat gram = theta.transpose() * theta;
    const Mat thetat_x = theta.transpose() * xdot;
    Mat w = Mat::Zero(theta.cols(), xdot.cols());
    for (Eigen::Index j = 0; j < xdot.cols(); ++j) {
        const auto act =
            detail::stlsq_support(theta, gram, thetat_x.col(j), lambda, o);
        w.col(j) = detail::ols_on_support(theta, xdot.col(j), act, info);
        if (info && act.empty())
            info->warnings.push_back("state column " + std::to_string(j) +
                                     ": all terms thresholded away (empty "
                                     "model)");
    }
    if (o.prune) w = l0_prune(theta, xdot, w, lambda);
    return w;
}

// Sparse relaxed regularized regression: alternate the relaxed ridge solve
//   w_dense = (Theta^T Theta + I/kappa)^-1 (Theta^T Xdot + w_sparse/kappa)
// with a proximal threshold of w_dense (hard threshold sqrt(2*lambda*kappa)
// or soft threshold lambda*kappa). Iterations start from a thresholded
// least-squares pass, which lands the relaxation in the right basin when
// collinear column pairs would otherwise split coefficients below the
// threshold. The recovered support is always debiased by a plain
// least-squares refit, then pruned like stlsq.
inline Mat sr3(const Mat& theta, const Mat& xdot, double lambda,
               double kappa = 1.0, const Sr3Options& o = {},
               RegressionInfo* info = nullptr) {
    if (!(kappa > 0)) throw config_error("sr3 relaxation kappa must be > 0");
    if (lambda < 0) throw config_error("sr3 lambda must be >= 0");

    const Eigen::Index p = theta.cols(), n = xdot.cols();
    Mat a = theta.transpose() * theta;
    a.diagonal().array() += 1.0 / kappa;
    const Eigen::LDLT<Mat> a_ldlt(a);
    const Mat b = theta.transpose() * xdot;

    const double thr = o.hard ? std::sqrt(2 * lambda * kappa) : lambda * kappa;
    auto prox = [&](Mat v) {
        if (o.hard)
            v = (v.array().abs() < thr).select(0.0, v);
        else
            v = (v.array().sign() * (v.array().abs() - thr).max(0.0)).matrix();
        return v;
    };

    StlsqOptions warm;
    warm.prune = false;
    Mat ws = prox(stlsq(theta, xdot, lambda, warm));

    bool converged = false;
    for (int it = 0; it < o.iters; ++it) {
        const Mat wn = prox(a_ldlt.solve(b + ws / kappa));
        const double diff = (wn - ws).cwiseAbs().maxCoeff();
        ws = wn;
        if (diff < o.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        if (info) {
            info->converged = false;
            info->warnings.push_back(
                "sr3 did not converge within the iteration budget; "
                "continuing with the final iterate's support");
        }
    }

    Mat w = Mat::Zero(p, n);
    for (Eigen::Index j = 0; j < n; ++j)
        w.col(j) = detail::ols_on_support(theta, xdot.col(j),
                                          detail::support_of(ws.col(j)), info);
    if (o.prune) w = l0_prune(theta, xdot, w, lambda);
    return w;
}

}  // namespace sindyquad
