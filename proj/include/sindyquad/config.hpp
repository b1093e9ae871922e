#pragma once

#include "sindyquad/control.hpp"
#include "sindyquad/library.hpp"
#include "sindyquad/sindy.hpp"
#include "sindyquad/trajectory.hpp"
#include "sindyquad/types.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

namespace sindyquad {

struct SimulationConfig {
    double dt = 0.05;
    int steps = 1000;
    uint64_t seed = 0;
    Vec noise_sigma = Vec::Zero(6);  // per-state measurement noise std-dev
};

struct PathsConfig {
    std::string output_dir = "out";
};

// One JSON document configures every command; each field has a default so
// all commands run bare.
struct RunConfig {
    QuadParams quad;
    PdGains gains;
    TrajectoryCase trajectory = case_diamond();
    TrajectoryCase holdout = case_diamond_holdout();
    SimulationConfig simulation;
    LibrarySpec library;
    OptimizerConfig optimizer;
    std::vector<double> grid;  // sweep grid; empty = default 0:0.05:1
    PathsConfig paths;
};

namespace detail {

using config_json = nlohmann::ordered_json;

inline void require_keys(const config_json& j, const std::string& section,
                         std::initializer_list<const char*> allowed) {
    if (!j.is_object())
        throw config_error("section '" + section + "' must be a JSON object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw config_error("unknown key '" + item.key() +
                               "' in section '" + section + "'");
    }
}

template <typename T>
void maybe(const config_json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

inline void parse_quad(const config_json& j, QuadParams& p) {
    require_keys(j, "quad",
                 {"mass", "arm_length", "jx", "jy", "jz", "gravity", "gamma"});
    maybe(j, "mass", p.mass);
    maybe(j, "arm_length", p.arm_length);
    maybe(j, "jx", p.jx);
    maybe(j, "jy", p.jy);
    maybe(j, "jz", p.jz);
    maybe(j, "gravity", p.gravity);
    maybe(j, "gamma", p.gamma);
    p.validate();
}

inline void parse_gains(const config_json& j, PdGains& g) {
    require_keys(j, "gains",
                 {"kp_y", "kv_y", "kp_z", "kv_z", "kp_phi", "kv_phi"});
    maybe(j, "kp_y", g.kp_y);
    maybe(j, "kv_y", g.kv_y);
    maybe(j, "kp_z", g.kp_z);
    maybe(j, "kv_z", g.kv_z);
    maybe(j, "kp_phi", g.kp_phi);
    maybe(j, "kv_phi", g.kv_phi);
    g.validate();
}

inline void parse_case(const config_json& j, const std::string& section,
                       TrajectoryCase& c) {
    require_keys(j, section,
                 {"case", "x0", "target_y", "target_z", "t_step", "y_final",
                  "ramp_duration", "amplitude", "frequency", "vertices",
                  "edge_duration", "t_offset"});
    if (j.contains("case")) c = named_case(j.at("case").get<std::string>());
    if (j.contains("x0")) {
        const auto v = j.at("x0").get<std::vector<double>>();
        if (v.size() != 6)
            throw config_error("'" + section + ".x0' must have 6 entries");
        for (int i = 0; i < 6; ++i) c.x0[i] = v[static_cast<size_t>(i)];
    }
    maybe(j, "target_y", c.target_y);
    maybe(j, "target_z", c.target_z);
    maybe(j, "t_step", c.t_step);
    maybe(j, "y_final", c.y_final);
    maybe(j, "ramp_duration", c.ramp_duration);
    maybe(j, "amplitude", c.amplitude);
    maybe(j, "frequency", c.frequency);
    if (j.contains("vertices")) {
        const auto v = j.at("vertices").get<std::vector<std::vector<double>>>();
        if (v.size() != 4)
            throw config_error("'" + section + ".vertices' must list 4 points");
        for (size_t i = 0; i < 4; ++i) {
            if (v[i].size() != 2)
                throw config_error("'" + section +
                                   ".vertices' entries must be [y, z] pairs");
            c.vertices[i] = Vec2(v[i][0], v[i][1]);
        }
    }
    maybe(j, "edge_duration", c.edge_duration);
    maybe(j, "t_offset", c.t_offset);
    if (!(c.edge_duration > 0))
        throw config_error("'" + section + ".edge_duration' must be > 0");
}

inline void parse_simulation(const config_json& j, SimulationConfig& s) {
    require_keys(j, "simulation", {"dt", "steps", "seed", "noise_sigma"});
    maybe(j, "dt", s.dt);
    maybe(j, "steps", s.steps);
    maybe(j, "seed", s.seed);
    if (j.contains("noise_sigma")) {
        const auto& n = j.at("noise_sigma");
        if (n.is_number()) {
            s.noise_sigma = Vec::Constant(6, n.get<double>());
        } else {
            const auto v = n.get<std::vector<double>>();
            if (v.size() != 6)
                throw config_error(
                    "'simulation.noise_sigma' must be a number or 6 entries");
            for (int i = 0; i < 6; ++i)
                s.noise_sigma[i] = v[static_cast<size_t>(i)];
        }
    }
    if (!(s.dt > 0)) throw config_error("'simulation.dt' must be > 0");
    if (s.steps < 2) throw config_error("'simulation.steps' must be >= 2");
}

inline void parse_library(const config_json& j, LibrarySpec& l) {
    require_keys(j, "library",
                 {"degree", "fourier_states", "control_times_fourier",
                  "include_bias"});
    maybe(j, "degree", l.degree);
    maybe(j, "fourier_states", l.fourier_states);
    maybe(j, "control_times_fourier", l.control_times_fourier);
    maybe(j, "include_bias", l.include_bias);
}

inline void parse_optimizer(const config_json& j, OptimizerConfig& o,
                            std::vector<double>& grid) {
    require_keys(j, "optimizer",
                 {"name", "lambda", "kappa", "stlsq_iters", "sr3_iters",
                  "ridge", "tol", "hard_threshold", "prune", "grid"});
    maybe(j, "name", o.name);
    maybe(j, "lambda", o.lambda);
    maybe(j, "kappa", o.kappa);
    maybe(j, "stlsq_iters", o.stlsq_iters);
    maybe(j, "sr3_iters", o.sr3_iters);
    maybe(j, "ridge", o.ridge);
    maybe(j, "tol", o.tol);
    maybe(j, "hard_threshold", o.hard_threshold);
    maybe(j, "prune", o.prune);
    if (j.contains("grid")) grid = j.at("grid").get<std::vector<double>>();
    if (o.name != "stlsq" && o.name != "sr3")
        throw config_error("'optimizer.name' must be stlsq or sr3");
    if (o.lambda < 0) throw config_error("'optimizer.lambda' must be >= 0");
}

inline void parse_paths(const config_json& j, PathsConfig& p) {
    require_keys(j, "paths", {"output_dir"});
    maybe(j, "output_dir", p.output_dir);
}

}  // namespace detail

inline RunConfig config_from_json(const detail::config_json& j) {
    detail::require_keys(j, "(top level)",
                         {"quad", "gains", "trajectory", "holdout",
                          "simulation", "library", "optimizer", "paths"});
    RunConfig c;
    try {
        if (j.contains("quad")) detail::parse_quad(j.at("quad"), c.quad);
        if (j.contains("gains")) detail::parse_gains(j.at("gains"), c.gains);
        if (j.contains("trajectory"))
            detail::parse_case(j.at("trajectory"), "trajectory", c.trajectory);
        if (j.contains("holdout"))
            detail::parse_case(j.at("holdout"), "holdout", c.holdout);
        if (j.contains("simulation"))
            detail::parse_simulation(j.at("simulation"), c.simulation);
        if (j.contains("library"))
            detail::parse_library(j.at("library"), c.library);
        if (j.contains("optimizer"))
            detail::parse_optimizer(j.at("optimizer"), c.optimizer, c.grid);
        if (j.contains("paths")) detail::parse_paths(j.at("paths"), c.paths);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("bad config value: ") + e.what());
    }
    return c;
}

// Environment override for the RNG seed; applied after any config file.
inline void apply_env_seed(RunConfig& c) {
    const char* env = std::getenv("SINDYQUAD_SEED");
    if (!env) return;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
        throw config_error(std::string("SINDYQUAD_SEED is not an integer: '") +
                           env + "'");
    c.simulation.seed = v;
}

inline RunConfig load_config(const std::string& path) {
    RunConfig c;
    if (!path.empty()) {
        std::ifstream f(path);
        if (!f) throw config_error("cannot open config file '" + path + "'");
        detail::config_json j;
        try {
            f >> j;
        } catch (const nlohmann::json::exception& e) {
            throw config_error(path + ": invalid JSON (" + e.what() + ")");
        }
        c = config_from_json(j);
    }
    apply_env_seed(c);
    return c;
}

}  // namespace sindyquad
