#pragma once

#include "sindyquad/control.hpp"
#include "sindyquad/dynamics.hpp"
#include "sindyquad/trajectory.hpp"
#include "sindyquad/types.hpp"

#include <cmath>
#include <random>
#include <string>

namespace sindyquad {

// One classical RK4 step with the control held constant over the step
// (zero-order hold, matching a discrete controller).
template <typename Plant>
Vec6 rk4_step(Plant&& f, const Vec6& x, const Vec2& u, double dt) {
    const Vec6 k1 = f(x, u);
    const Vec6 k2 = f(x + 0.5 * dt * k1, u);
    const Vec6 k3 = f(x + 0.5 * dt * k2, u);
    const Vec6 k4 = f(x + dt * k3, u);
    if (!k1.allFinite() || !k2.allFinite() || !k3.allFinite() ||
        !k4.allFinite())
        throw numerical_error("non-finite derivative inside RK4 step");
    return x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
}

// Closed-loop rollout of an arbitrary plant under the PD tracking law.
// Row k of the result holds the state x_k and the control u_k applied over
// [t_k, t_k + dt); timestamps are k*dt computed by multiplication so they
// stay exact. The final state is recorded without being stepped further.
template <typename Plant>
SnapshotSet rollout_with_plant(Plant&& f, const TrajectoryCase& c,
                               const PdGains& gains, const QuadParams& p,
                               double dt, int steps) {
    if (steps < 2) throw config_error("rollout needs at least 2 steps");
    if (!(dt > 0)) throw config_error("rollout needs dt > 0");

    SnapshotSet ss;
    ss.dt = dt;
    ss.state_names = planar_state_names();
    ss.control_names = planar_control_names();
    ss.t.resize(steps);
    ss.X.resize(steps, 6);
    ss.U.resize(steps, 2);

    Vec6 x = c.x0;
    for (int k = 0; k < steps; ++k) {
        const double t = k * dt;
        const Vec2 u = pd_control(x, reference(c, t), gains, p);
        ss.t[k] = t;
        ss.X.row(k) = x.transpose();
        ss.U.row(k) = u.transpose();
        if (k + 1 < steps) {
            x = rk4_step(f, x, u, dt);
            if (!x.allFinite() || x.cwiseAbs().maxCoeff() > 1e6)
                throw numerical_error("simulation diverged at step " +
                                      std::to_string(k + 1) +
                                      " (|state| > 1e6)");
        }
    }
    return ss;
}

// Ground-truth rollout: the physical planar model is the plant.
inline SnapshotSet rollout(const TrajectoryCase& c, const PdGains& gains,
                           const QuadParams& p, double dt, int steps) {
    return rollout_with_plant(
        [&p](const Vec6& x, const Vec2& u) {
            return planar_derivative(x, u, p);
        },
        c, gains, p, dt, steps);
}

// Fill Xdot with the exact model derivative at every snapshot (useful for
// isolating regression behaviour from differentiation error).
inline void fill_analytic_xdot(SnapshotSet& ss, const QuadParams& p) {
    ss.Xdot.resize(ss.rows(), 6);
    for (Eigen::Index k = 0; k < ss.rows(); ++k) {
        const Vec6 x = ss.X.row(k).transpose();
        const Vec2 u = ss.U.row(k).transpose();
        ss.Xdot.row(k) = planar_derivative(x, u, p).transpose();
    }
}

// Additive Gaussian measurement noise on the states, one std-dev per column;
// controls and timestamps stay untouched. Deterministic for a given seed.
inline SnapshotSet add_noise(const SnapshotSet& ss, const Vec& sigma,
                             uint64_t seed) {
    if (sigma.size() != ss.X.cols())
        throw config_error("noise sigma length must match the state count");
    if ((sigma.array() < 0).any())
        throw config_error("noise sigma must be nonnegative");

    SnapshotSet out = ss;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Eigen::Index j = 0; j < out.X.cols(); ++j) {
        if (sigma[j] == 0) continue;
        for (Eigen::Index i = 0; i < out.X.rows(); ++i)
            out.X(i, j) += sigma[j] * gauss(rng);
    }
    return out;
}

}  // namespace sindyquad
