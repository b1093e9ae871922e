#pragma once

#include "sindyquad/library.hpp"
#include "sindyquad/model.hpp"
#include "sindyquad/regression.hpp"
#include "sindyquad/types.hpp"

#include <cmath>
#include <set>
#include <string>
#include <vector>

namespace sindyquad {

// Order-one forward differences, Xdot[k] = (X[k+1] - X[k]) / dt. The last
// row of t, X, U is dropped so every matrix keeps m-1 aligned rows.
inline SnapshotSet finite_difference(const SnapshotSet& ss) {
    const Eigen::Index m = ss.rows();
    if (m < 2) throw data_error("finite differences need at least 2 snapshots");
    const double dt = ss.t[1] - ss.t[0];
    for (Eigen::Index k = 0; k + 1 < m; ++k)
        if (std::abs(ss.t[k + 1] - ss.t[k] - dt) > 1e-12)
            throw data_error("non-uniform timestamps at row " +
                             std::to_string(k + 1) +
                             "; finite differences need a fixed step");

    SnapshotSet out = ss;
    out.dt = dt;
    out.t = ss.t.head(m - 1);
    out.X = ss.X.topRows(m - 1);
    out.U = ss.U.topRows(m - 1);
    out.Xdot = (ss.X.bottomRows(m - 1) - ss.X.topRows(m - 1)) / dt;
    return out;
}

// Data-excitation check: flags library columns that carry no usable signal,
// i.e. columns that vanish or stay constant over the whole record. A column
// that never moves is indistinguishable from the bias term, so the
// regression cannot attribute effects to it -- the classic failure mode of
// fitting from an equilibrium (hover) record. Benign near-collinearity
// between varying columns (e.g. cos(phi) vs. 1 - phi^2/2 at small roll) is
// deliberately not flagged; the ridge term keeps those solves stable.
inline std::vector<std::string> unexcited_terms(const CandidateLibrary& lib,
                                                double tol = 1e-12) {
    std::set<std::string> flagged;
    const double root_m = std::sqrt(static_cast<double>(lib.Theta.rows()));
    for (Eigen::Index j = 0; j < lib.Theta.cols(); ++j) {
        const std::string& label = lib.labels[static_cast<size_t>(j)];
        const auto col = lib.Theta.col(j);
        if (col.norm() < tol * root_m) {
            flagged.insert(label);
            continue;
        }
        if (label == "1") continue;  // constant by construction
        const double mean = col.mean();
        const double stdev = std::sqrt((col.array() - mean).square().mean());
        if (stdev < tol * (1.0 + std::abs(mean))) flagged.insert(label);
    }
    return {flagged.begin(), flagged.end()};
}

struct OptimizerConfig {
    std::string name = "sr3";
    double lambda = 0.45;
    double kappa = 1.0;
    int stlsq_iters = 20;
    int sr3_iters = 5000;
    double ridge = 1e-4;
    double tol = 1e-10;
    bool hard_threshold = true;
    bool prune = true;

    StlsqOptions stlsq_options() const {
        StlsqOptions o;
        o.iters = stlsq_iters;
        o.ridge = ridge;
        o.prune = prune;
        return o;
    }
    Sr3Options sr3_options() const {
        Sr3Options o;
        o.iters = sr3_iters;
        o.tol = tol;
        o.hard = hard_threshold;
        o.prune = prune;
        return o;
    }
};

struct FitResult {
    SparseModel model;
    std::vector<std::string> warnings;
    bool converged = true;
};

// Library construction plus the chosen sparse regression, with data-quality
// warnings collected along the way.
inline FitResult fit(const SnapshotSet& ss, const LibrarySpec& spec,
                     const OptimizerConfig& opt) {
    if (!ss.has_xdot())
        throw data_error(
            "snapshot set has no derivatives; run finite_difference first or "
            "fill them analytically");

    const CandidateLibrary lib =
        build_library(ss.X, ss.U, spec, ss.state_names, ss.control_names);

    FitResult res;
    const auto bad = unexcited_terms(lib);
    if (!bad.empty()) {
        std::string msg =
            "data is not exciting enough to separate candidate terms:";
        for (const auto& l : bad) msg += " " + l;
        res.warnings.push_back(msg);
    }
    if (opt.lambda == 0)
        res.warnings.push_back(
            "lambda = 0 disables thresholding; the model will be dense");

    RegressionInfo info;
    Mat omega;
    if (opt.name == "stlsq")
        omega = stlsq(lib.Theta, ss.Xdot, opt.lambda, opt.stlsq_options(),
                      &info);
    else if (opt.name == "sr3")
        omega = sr3(lib.Theta, ss.Xdot, opt.lambda, opt.kappa,
                    opt.sr3_options(), &info);
    else
        throw config_error("unknown optimizer '" + opt.name +
                           "' (expected stlsq or sr3)");

    res.warnings.insert(res.warnings.end(), info.warnings.begin(),
                        info.warnings.end());
    res.converged = info.converged;
    res.model.omega = std::move(omega);
    res.model.labels = lib.labels;
    res.model.state_names = ss.state_names;
    res.model.control_names = ss.control_names;
    res.model.spec = spec;
    res.model.lambda = opt.lambda;
    res.model.optimizer = opt.name;
    return res;
}

}  // namespace sindyquad
