#pragma once

#include "sindyquad/config.hpp"
#include "sindyquad/evaluate.hpp"
#include "sindyquad/integrate.hpp"
#include "sindyquad/io.hpp"
#include "sindyquad/model.hpp"
#include "sindyquad/sindy.hpp"

#include <filesystem>
#include <iostream>
#include <string>

namespace sindyquad {

namespace detail {

inline std::string out_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.paths.output_dir);
    return (std::filesystem::path(cfg.paths.output_dir) / name).string();
}

// Largest position-tracking error |(y, z) - (y_d, z_d)| over a rollout.
inline double tracking_error(const SnapshotSet& ss, const TrajectoryCase& c) {
    double worst = 0;
    for (Eigen::Index k = 0; k < ss.rows(); ++k) {
        const ReferencePoint r = reference(c, ss.t[k]);
        worst = std::max(worst, std::abs(ss.X(k, 0) - r.y));
        worst = std::max(worst, std::abs(ss.X(k, 1) - r.z));
    }
    return worst;
}

inline void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace detail

// Simulate the configured trajectory case and persist the snapshot matrix
// plus a small summary document.
inline void cmd_simulate(const RunConfig& cfg) {
    SnapshotSet ss = rollout(cfg.trajectory, cfg.gains, cfg.quad,
                             cfg.simulation.dt, cfg.simulation.steps);
    if ((cfg.simulation.noise_sigma.array() > 0).any())
        ss = add_noise(ss, cfg.simulation.noise_sigma, cfg.simulation.seed);

    const std::string tag = case_name(cfg.trajectory);
    const std::string csv = detail::out_path(cfg, "snapshots_" + tag + ".csv");
    write_snapshots_csv(csv, ss);

    json summary;
    summary["case"] = tag;
    summary["rows"] = ss.rows();
    summary["dt"] = ss.dt;
    json final_state = json::object();
    for (int j = 0; j < 6; ++j)
        final_state[ss.state_names[static_cast<size_t>(j)]] =
            ss.X(ss.rows() - 1, j);
    summary["final_state"] = std::move(final_state);
    summary["max_tracking_error"] = detail::tracking_error(ss, cfg.trajectory);
    summary["snapshots"] = csv;
    const std::string sj = detail::out_path(cfg, "summary_" + tag + ".json");
    write_json_file(sj, summary);
    std::cout << "wrote " << csv << " and " << sj << "\n";
}

// Fit a sparse model to an existing snapshot CSV and persist it with its
// rendered equations.
inline SparseModel cmd_fit(const RunConfig& cfg, const std::string& data_path) {
    const SnapshotSet raw = read_snapshots_csv(data_path);
    const SnapshotSet ss = finite_difference(raw);
    const FitResult fr = fit(ss, cfg.library, cfg.optimizer);
    detail::print_warnings(fr.warnings);

    const std::string mj = detail::out_path(cfg, "model.json");
    write_model_json(mj, fr.model);
    std::string eqs;
    for (const auto& e : render_equations(fr.model)) eqs += e + "\n";
    const std::string et = detail::out_path(cfg, "equations.txt");
    write_text_file(et, eqs);
    std::cout << eqs << "wrote " << mj << " and " << et << "\n";
    return fr.model;
}

// Scan the threshold grid with train/test snapshot sets, persist the sweep
// table and the model refit at the selected lambda.
inline SweepResult cmd_sweep(const RunConfig& cfg,
                             const std::string& train_path,
                             const std::string& test_path, int jobs = 1) {
    const SnapshotSet train = read_snapshots_csv(train_path);
    const SnapshotSet test = read_snapshots_csv(test_path);
    const std::vector<double> grid =
        cfg.grid.empty() ? default_lambda_grid() : cfg.grid;

    const SweepResult sw =
        lambda_sweep(train, test, cfg.holdout, cfg.gains, cfg.quad,
                     cfg.library, cfg.optimizer, grid, jobs);

    const std::string sc = detail::out_path(cfg, "sweep.csv");
    write_sweep_csv(sc, sw);

    OptimizerConfig sel = cfg.optimizer;
    sel.lambda = sw.selected_lambda;
    const FitResult fr = fit(finite_difference(train), cfg.library, sel);
    detail::print_warnings(fr.warnings);
    const std::string mj = detail::out_path(cfg, "model_selected.json");
    write_model_json(mj, fr.model);

    json summary;
    summary["selected_lambda"] = sw.selected_lambda;
    summary["selected_objective"] = sw.selected_objective;
    summary["support_plateau"] = sw.has_support_plateau;
    if (sw.has_support_plateau) {
        summary["plateau_lo"] = sw.plateau_lo;
        summary["plateau_hi"] = sw.plateau_hi;
    }
    summary["sweep_csv"] = sc;
    summary["model"] = mj;
    const std::string sj = detail::out_path(cfg, "sweep_summary.json");
    write_json_file(sj, summary);
    std::cout << "selected lambda " << sw.selected_lambda << "; wrote " << sc
              << ", " << mj << " and " << sj << "\n";
    return sw;
}

// Compare a fitted model against the physical ground truth on one case:
// absolute-error traces, the per-state RMSE table, and a term-by-term
// coefficient report.
inline void cmd_eval(const RunConfig& cfg, const std::string& model_path) {
    const SparseModel model = read_model_json(model_path);
    const std::string tag = case_name(cfg.trajectory);

    const SnapshotSet truth = rollout(cfg.trajectory, cfg.gains, cfg.quad,
                                      cfg.simulation.dt, cfg.simulation.steps);
    const SnapshotSet pred =
        simulate_model(model, cfg.trajectory, cfg.gains, cfg.quad,
                       cfg.simulation.dt, cfg.simulation.steps);

    const Mat err = abs_error_trace(truth.X, pred.X);
    const std::string ec = detail::out_path(cfg, "errors_" + tag + ".csv");
    {
        auto f = detail::open_for_write(ec);
        f << "t";
        for (const auto& name : truth.state_names) f << "," << name;
        f << "\n";
        for (Eigen::Index k = 0; k < err.rows(); ++k) {
            f << detail::format_double(truth.t[k]);
            for (Eigen::Index j = 0; j < err.cols(); ++j)
                f << "," << detail::format_double(err(k, j));
            f << "\n";
        }
    }

    const Vec r = rmse(truth.X, pred.X);
    const ComparisonReport rep =
        compare_to_truth(model, ground_truth_model(cfg.quad, model.spec));

    json summary;
    summary["case"] = tag;
    json rj = json::object();
    for (int j = 0; j < 6; ++j)
        rj[truth.state_names[static_cast<size_t>(j)]] = r[j];
    summary["rmse"] = std::move(rj);
    summary["max_abs_error"] = err.maxCoeff();
    summary["support_match"] = rep.support_match;
    summary["max_relative_coefficient_delta"] = rep.max_rel_delta;
    summary["comparison"] = comparison_to_json(rep);
    const std::string sj = detail::out_path(cfg, "eval_" + tag + ".json");
    write_json_file(sj, summary);
    const std::string ct = detail::out_path(cfg, "comparison_" + tag + ".txt");
    write_text_file(ct, render_comparison(rep));

    std::cout << render_comparison(rep) << "per-state RMSE:";
    for (int j = 0; j < 6; ++j) std::cout << " " << r[j];
    std::cout << "\nwrote " << ec << ", " << sj << " and " << ct << "\n";
}

}  // namespace sindyquad
