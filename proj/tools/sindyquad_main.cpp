#include "sindyquad/app.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

// Options shared by every subcommand.
void add_common(CLI::App* sub, std::string& config_path, std::string& out_dir) {
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--output-dir", out_dir,
                    "directory for generated artifacts (default 'out')");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "sindyquad: simulate a planar quadrotor and rediscover its dynamics "
        "with sparse regression"};
    app.require_subcommand(1);

    std::string config_path, out_dir, case_arg, optimizer_arg;
    std::string data_path, train_path, test_path, model_path;
    double dt = 0, lambda = 0, noise_sigma = 0;
    long long steps = 0;
    unsigned long long seed = 0;
    int jobs = 1;

    CLI::App* sim = app.add_subcommand(
        "simulate", "integrate a flight case and write snapshots");
    add_common(sim, config_path, out_dir);
    sim->add_option("--case", case_arg, "trajectory case (A, B, C or holdout)");
    sim->add_option("--dt", dt, "sampling interval in seconds");
    sim->add_option("--steps", steps, "number of snapshots");
    sim->add_option("--seed", seed, "RNG seed for measurement noise");
    sim->add_option("--noise-sigma", noise_sigma,
                    "Gaussian noise sigma applied to every state channel");

    CLI::App* fit = app.add_subcommand(
        "fit", "fit a sparse model to a snapshot CSV");
    add_common(fit, config_path, out_dir);
    fit->add_option("data", data_path, "snapshot CSV to fit")->required();
    fit->add_option("--lambda", lambda, "sparsity threshold");
    fit->add_option("--optimizer", optimizer_arg, "stlsq or sr3");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "scan the sparsity threshold on train/test snapshot sets");
    add_common(sweep, config_path, out_dir);
    sweep->add_option("train", train_path, "training snapshot CSV")->required();
    sweep->add_option("test", test_path, "held-out snapshot CSV")->required();
    sweep->add_option("--optimizer", optimizer_arg, "stlsq or sr3");
    sweep->add_option("--jobs", jobs, "worker threads for the sweep");

    CLI::App* eval = app.add_subcommand(
        "eval", "compare a fitted model against the true plant on one case");
    add_common(eval, config_path, out_dir);
    eval->add_option("model", model_path, "model JSON to evaluate")->required();
    eval->add_option("--case", case_arg, "trajectory case (A, B, C or holdout)");
    eval->add_option("--dt", dt, "sampling interval in seconds");
    eval->add_option("--steps", steps, "number of snapshots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        sindyquad::RunConfig cfg = sindyquad::load_config(config_path);

        CLI::App* active = app.get_subcommands().front();
        auto given = [active](const char* name) {
            const CLI::Option* o = active->get_option_no_throw(name);
            return o != nullptr && o->count() > 0;
        };
        if (given("--output-dir")) cfg.paths.output_dir = out_dir;
        if (given("--case")) cfg.trajectory = sindyquad::named_case(case_arg);
        if (given("--dt")) cfg.simulation.dt = dt;
        if (given("--steps")) {
            if (steps < 2)
                throw sindyquad::config_error("--steps must be at least 2");
            cfg.simulation.steps = static_cast<int>(steps);
        }
        if (given("--seed")) cfg.simulation.seed = seed;
        if (given("--noise-sigma")) {
            if (noise_sigma < 0)
                throw sindyquad::config_error("--noise-sigma must be >= 0");
            cfg.simulation.noise_sigma =
                sindyquad::Vec6::Constant(noise_sigma);
        }
        if (given("--lambda")) {
            if (lambda < 0)
                throw sindyquad::config_error("--lambda must be >= 0");
            cfg.optimizer.lambda = lambda;
        }
        if (given("--optimizer")) {
            if (optimizer_arg != "stlsq" && optimizer_arg != "sr3")
                throw sindyquad::config_error("unknown optimizer '" +
                                              optimizer_arg +
                                              "' (expected stlsq or sr3)");
            cfg.optimizer.name = optimizer_arg;
        }
        if (given("--jobs") && jobs < 1)
            throw sindyquad::config_error("--jobs must be >= 1");

        if (active == sim) sindyquad::cmd_simulate(cfg);
        else if (active == fit) sindyquad::cmd_fit(cfg, data_path);
        else if (active == sweep)
            sindyquad::cmd_sweep(cfg, train_path, test_path, jobs);
        else sindyquad::cmd_eval(cfg, model_path);
    } catch (const sindyquad::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const sindyquad::data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const sindyquad::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
