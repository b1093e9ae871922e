#pragma once

#include "sindyquad/model.hpp"
#include "sindyquad/sindy.hpp"
#include "sindyquad/types.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace sindyquad {

// Per-state root mean squared error between two trajectories (population
// mean over rows).
inline Vec rmse(const Mat& truth, const Mat& pred) {
    if (truth.rows() != pred.rows() || truth.cols() != pred.cols())
        throw data_error("rmse: trajectory shapes differ");
    if (truth.rows() < 1) throw data_error("rmse: empty trajectories");
    return ((truth - pred).array().square().colwise().mean())
        .sqrt()
        .matrix()
        .transpose();
}

inline Mat abs_error_trace(const Mat& truth, const Mat& pred) {
    if (truth.rows() != pred.rows() || truth.cols() != pred.cols())
        throw data_error("abs_error_trace: trajectory shapes differ");
    return (truth - pred).cwiseAbs();
}

struct SweepRecord {
    double lambda = 0;
    Vec rmse_per_state;      // empty when diverged
    double objective = 0;    // sum of per-state RMSE / test std
    Eigen::Index support_size = 0;
    bool support_match = false;
    bool diverged = false;
    std::string note;
};

struct SweepResult {
    std::vector<SweepRecord> records;
    double selected_lambda = 0;
    double selected_objective = 0;
    bool has_support_plateau = false;  // contiguous correct-support sub-range
    double plateau_lo = 0;
    double plateau_hi = 0;
};

inline std::vector<double> default_lambda_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 20; ++i) g.push_back(0.05 * i);
    return g;
}

namespace detail {

inline bool support_matches(const SparseModel& a, const SparseModel& b) {
    for (Eigen::Index j = 0; j < a.omega.cols(); ++j)
        if (a.support(j) != b.support(j)) return false;
    return true;
}

}  // namespace detail

// Cross-validated threshold scan: fit on the training set at each lambda,
// re-simulate the fitted model on the held-out scenario, and score by the
// summed per-state RMSE normalized by the test set's standard deviations
// (phi_dot errors would otherwise dominate the sum). Ties go to the larger
// lambda, i.e. the sparser model.
inline SweepResult lambda_sweep(const SnapshotSet& train,
                                const SnapshotSet& test,
                                const TrajectoryCase& test_case,
                                const PdGains& gains, const QuadParams& params,
                                const LibrarySpec& spec,
                                const OptimizerConfig& opt,
                                const std::vector<double>& grid,
                                int jobs = 1) {
    if (grid.empty()) throw config_error("lambda sweep needs a non-empty grid");
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw config_error("lambda grid must be strictly increasing");

    const SnapshotSet train_fd =
        train.has_xdot() ? train : finite_difference(train);
    const SparseModel truth = ground_truth_model(params, spec);
    const Vec test_std = (test.X.rowwise() - test.X.colwise().mean())
                             .array()
                             .square()
                             .colwise()
                             .mean()
                             .sqrt()
                             .matrix()
                             .transpose();

    SweepResult result;
    result.records.resize(grid.size());

    auto run_one = [&](size_t i) {
        SweepRecord& rec = result.records[i];
        rec.lambda = grid[i];
        try {
            OptimizerConfig o = opt;
            o.lambda = grid[i];
            const FitResult fr = fit(train_fd, spec, o);
            rec.support_size = fr.model.support_size();
            rec.support_match = detail::support_matches(fr.model, truth);
            for (const auto& w : fr.warnings)
                rec.note += (rec.note.empty() ? "" : "; ") + w;
            const SnapshotSet sim =
                simulate_model(fr.model, test_case, gains, params, test.dt,
                               static_cast<int>(test.rows()));
            rec.rmse_per_state = rmse(test.X, sim.X);
            rec.objective =
                (rec.rmse_per_state.array() / test_std.array()).sum();
        } catch (const std::exception& e) {
            rec.diverged = true;
            rec.note = e.what();
        }
    };

    if (jobs <= 1) {
        for (size_t i = 0; i < grid.size(); ++i) run_one(i);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&]() {
            for (size_t i = next.fetch_add(1); i < grid.size();
                 i = next.fetch_add(1))
                run_one(i);
        };
        std::vector<std::thread> pool;
        const int n_threads =
            std::min<int>(jobs, static_cast<int>(grid.size()));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    bool any_ok = false;
    for (const auto& rec : result.records) {
        if (rec.diverged) continue;
        if (!any_ok || rec.objective <= result.selected_objective) {
            result.selected_lambda = rec.lambda;
            result.selected_objective = rec.objective;
            any_ok = true;
        }
    }
    if (!any_ok) {
        std::string msg = "lambda sweep failed: every fit diverged";
        for (const auto& rec : result.records) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.2f", rec.lambda);
            msg += "\n  lambda=" + std::string(buf) + ": " + rec.note;
        }
        throw numerical_error(msg);
    }

    // Longest contiguous run of correct-support lambdas.
    size_t best_len = 0, best_start = 0, cur_len = 0, cur_start = 0;
    for (size_t i = 0; i < result.records.size(); ++i) {
        if (result.records[i].support_match) {
            if (cur_len == 0) cur_start = i;
            if (++cur_len > best_len) {
                best_len = cur_len;
                best_start = cur_start;
            }
        } else {
            cur_len = 0;
        }
    }
    if (best_len > 0) {
        result.has_support_plateau = true;
        result.plateau_lo = result.records[best_start].lambda;
        result.plateau_hi = result.records[best_start + best_len - 1].lambda;
    }
    return result;
}

struct TermDelta {
    std::string label;
    double model_coef = 0;
    double truth_coef = 0;
    double delta = 0;
};

struct ComparisonRow {
    std::string state;
    std::vector<TermDelta> terms;  // union of both supports, model order
    bool match = false;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    bool support_match = false;
    double max_rel_delta = 0;  // over terms active in the reference model
};

// Term-by-term comparison of two sparse models over the union of their
// supports, aligned by label.
inline ComparisonReport compare_to_truth(const SparseModel& model,
                                         const SparseModel& truth) {
    if (model.state_names != truth.state_names ||
        model.control_names != truth.control_names)
        throw data_error(
            "cannot compare models with different state/control names");

    auto coef_of = [](const SparseModel& m, const std::string& label,
                      Eigen::Index j) {
        for (size_t i = 0; i < m.labels.size(); ++i)
            if (m.labels[i] == label)
                return m.omega(static_cast<Eigen::Index>(i), j);
        return 0.0;
    };

    ComparisonReport rep;
    rep.support_match = true;
    static const char* const kDerivNames[] = {"y_dot",  "z_dot",  "phi_dot",
                                              "y_ddot", "z_ddot", "phi_ddot"};
    for (Eigen::Index j = 0; j < model.omega.cols(); ++j) {
        ComparisonRow row;
        row.state = j < 6 ? kDerivNames[j]
                          : model.state_names[static_cast<size_t>(j)];
        const auto ms = model.support(j);
        const auto ts = truth.support(j);
        std::set<std::string> all = ms;
        all.insert(ts.begin(), ts.end());
        for (const auto& label : all) {
            TermDelta d;
            d.label = label;
            d.model_coef = coef_of(model, label, j);
            d.truth_coef = coef_of(truth, label, j);
            d.delta = d.model_coef - d.truth_coef;
            if (d.truth_coef != 0)
                rep.max_rel_delta = std::max(
                    rep.max_rel_delta, std::abs(d.delta / d.truth_coef));
            row.terms.push_back(std::move(d));
        }
        row.match = (ms == ts);
        rep.support_match = rep.support_match && row.match;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

// Aligned plain-text rendering of a comparison report.
inline std::string render_comparison(const ComparisonReport& rep) {
    std::string out =
        "state      term            model         reference     delta\n";
    for (const auto& row : rep.rows) {
        for (const auto& t : row.terms) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%-10s %-15s %13.6f %13.6f %10.2e\n",
                          row.state.c_str(), t.label.c_str(), t.model_coef,
                          t.truth_coef, t.delta);
            out += buf;
        }
    }
    out += rep.support_match ? "support: exact match\n"
                             : "support: MISMATCH\n";
    return out;
}

}  // namespace sindyquad
