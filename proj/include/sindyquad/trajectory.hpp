#pragma once

#include "sindyquad/types.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace sindyquad {

// Desired position/velocity/acceleration for the two translational channels
// plus the roll channel (roll references are zero for every built-in case;
// the attitude command comes out of the position controller instead).
struct ReferencePoint {
    double y = 0, z = 0, phi = 0;
    double y_dot = 0, z_dot = 0, phi_dot = 0;
    double y_ddot = 0, z_ddot = 0, phi_ddot = 0;
};

struct TrajectoryCase {
    enum class Shape { Step, Sine, Diamond };

    Shape shape = Shape::Diamond;
    Vec6 x0 = Vec6::Zero();

    // Step: hold x0's position until t_step, then command (target_y, target_z).
    double target_y = 0.5;
    double target_z = 0.2;
    double t_step = 0;

    // Sine: y ramps linearly to y_final over ramp_duration while z follows
    // A sin(2 pi f t).
    double y_final = 4.0;
    double ramp_duration = 50.0;
    double amplitude = 0.5;
    double frequency = 0.4;  // Hz

    // Diamond: cyclic traversal of four vertices in the y-z plane, each edge
    // followed with a quintic (minimum-jerk) blend over edge_duration seconds.
    // t_offset phase-shifts the schedule, e.g. to start mid-circuit.
    std::array<Vec2, 4> vertices = {Vec2(0.0, 1.8), Vec2(1.0, 2.8),
                                    Vec2(2.0, 1.8), Vec2(1.0, 0.8)};
    double edge_duration = 3.125;
    double t_offset = 0;

    // Used to name artifacts derived from this case (snapshots_<tag>.csv and
    // friends), so the holdout diamond does not overwrite case C outputs.
    std::string tag = "diamond";
};

namespace detail {

// Quintic blend h(s) = 10 s^3 - 15 s^4 + 6 s^5 and its derivatives; h rises
// 0 -> 1 with zero velocity and acceleration at both ends, so edge-to-edge
// transitions stay smooth and the roll moment never has to jump.
inline void min_jerk(double s, double& h, double& hd, double& hdd) {
    h = s * s * s * (10 + s * (-15 + 6 * s));
    hd = s * s * (30 + s * (-60 + 30 * s));
    hdd = s * (60 + s * (-180 + 120 * s));
}

}  // namespace detail

inline ReferencePoint reference(const TrajectoryCase& c, double t) {
    ReferencePoint r;
    switch (c.shape) {
        case TrajectoryCase::Shape::Step: {
            if (t < c.t_step) {
                r.y = c.x0[0];
                r.z = c.x0[1];
            } else {
                r.y = c.target_y;
                r.z = c.target_z;
            }
            return r;
        }
        case TrajectoryCase::Shape::Sine: {
            const double w = 2 * std::numbers::pi * c.frequency;
            if (t < c.ramp_duration) {
                r.y = c.y_final * t / c.ramp_duration;
                r.y_dot = c.y_final / c.ramp_duration;
            } else {
                r.y = c.y_final;
            }
            r.z = c.amplitude * std::sin(w * t);
            r.z_dot = c.amplitude * w * std::cos(w * t);
            r.z_ddot = -c.amplitude * w * w * std::sin(w * t);
            return r;
        }
        case TrajectoryCase::Shape::Diamond: {
            const double ts = c.edge_duration;
            const double period = 4 * ts;
            double tau = std::fmod(t + c.t_offset, period);
            if (tau < 0) tau += period;
            int k = std::min(static_cast<int>(tau / ts), 3);
            const Vec2 a = c.vertices[static_cast<size_t>(k)];
            const Vec2 b = c.vertices[static_cast<size_t>((k + 1) % 4)];
            const double s = (tau - k * ts) / ts;
            double h, hd, hdd;
            detail::min_jerk(s, h, hd, hdd);
            const Vec2 pos = a + (b - a) * h;
            const Vec2 vel = (b - a) * hd / ts;
            const Vec2 acc = (b - a) * hdd / (ts * ts);
            r.y = pos[0];
            r.z = pos[1];
            r.y_dot = vel[0];
            r.z_dot = vel[1];
            r.y_ddot = acc[0];
            r.z_ddot = acc[1];
            return r;
        }
    }
    throw config_error("unknown trajectory shape");
}

// The three canonical flight cases: a position step from the origin, a
// ramp-plus-sine sweep, and the diamond circuit starting at its left vertex.
inline TrajectoryCase case_step() {
    TrajectoryCase c;
    c.shape = TrajectoryCase::Shape::Step;
    c.tag = "step";
    return c;
}

inline TrajectoryCase case_sine() {
    TrajectoryCase c;
    c.shape = TrajectoryCase::Shape::Sine;
    c.tag = "sine";
    return c;
}

inline TrajectoryCase case_diamond() {
    TrajectoryCase c;
    c.shape = TrajectoryCase::Shape::Diamond;
    c.x0 << 0, 1.8, 0, 0, 0, 0;
    return c;
}

// Held-out diamond used for cross-validation: same circuit at half speed,
// phase-shifted two edges so the run starts on-reference at the far vertex.
inline TrajectoryCase case_diamond_holdout() {
    TrajectoryCase c = case_diamond();
    c.edge_duration = 6.25;
    c.t_offset = 2 * c.edge_duration;
    c.x0 << 2.0, 1.8, 0, 0, 0, 0;
    c.tag = "holdout";
    return c;
}

inline TrajectoryCase named_case(const std::string& name) {
    if (name == "A" || name == "a" || name == "step") return case_step();
    if (name == "B" || name == "b" || name == "sine") return case_sine();
    if (name == "C" || name == "c" || name == "diamond") return case_diamond();
    if (name == "holdout") return case_diamond_holdout();
    throw config_error("unknown trajectory case '" + name +
                       "' (expected A, B, C, or holdout)");
}

inline std::string case_name(const TrajectoryCase& c) { return c.tag; }

}  // namespace sindyquad
