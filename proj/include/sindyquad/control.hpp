#pragma once

#include "sindyquad/trajectory.hpp"
#include "sindyquad/types.hpp"

namespace sindyquad {

struct PdGains {
    double kp_y = 4.6;
    double kv_y = 4.3;
    double kp_z = 4.6;
    double kv_z = 4.3;
    double kp_phi = 49.0;
    double kv_phi = 14.0;

    void validate() const {
        if (!(kp_y > 0) || !(kv_y > 0) || !(kp_z > 0) || !(kv_z > 0) ||
            !(kp_phi > 0) || !(kv_phi > 0))
            throw config_error("PD gains must all be positive");
    }
};

// Cascaded PD law for the planar quadrotor, linearized about hover:
//   u1    = m (z_ddot_d + kv_z (z_dot_d - z_dot) + kp_z (z_d - z) + g)
//   phi_c = -(1/g)(y_ddot_d + kv_y (y_dot_d - y_dot) + kp_y (y_d - y))
//   u2    = Jx (kv_phi (0 - phi_dot) + kp_phi (phi_c - phi))
// The roll command phi_c is recomputed every call; its rate and acceleration
// feedforwards are taken as zero (the attitude loop is much faster than the
// position loop, so they contribute little).
inline Vec2 pd_control(const PlanarState& x, const ReferencePoint& r,
                       const PdGains& k, const QuadParams& p) {
    const double u1 =
        p.mass * (r.z_ddot + k.kv_z * (r.z_dot - x[4]) +
                  k.kp_z * (r.z - x[1]) + p.gravity);
    const double phi_c =
        -(r.y_ddot + k.kv_y * (r.y_dot - x[3]) + k.kp_y * (r.y - x[0])) /
        p.gravity;
    const double u2 =
        p.jx * (k.kv_phi * (0.0 - x[5]) + k.kp_phi * (phi_c - x[2]));
    return Vec2(u1, u2);
}

}  // namespace sindyquad
