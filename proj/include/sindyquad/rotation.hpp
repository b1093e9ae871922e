#pragma once

#include "sindyquad/types.hpp"

#include <cmath>

namespace sindyquad {

// Body->inertial rotation for the psi-theta-phi (yaw, pitch, roll) sequence,
// i.e. R = Rz(psi) * Rx(phi) * Ry(theta). Note the unusual order: roll is
// about the intermediate x axis, pitch is the innermost rotation.
inline Mat3 rotation_matrix(const EulerAngles& a) {
    const double cf = std::cos(a.phi), sf = std::sin(a.phi);
    const double ct = std::cos(a.theta), st = std::sin(a.theta);
    const double cp = std::cos(a.psi), sp = std::sin(a.psi);
    Mat3 r;
    r << cp * ct - sf * sp * st, -cf * sp, cp * st + ct * sf * sp,
         ct * sp + cp * sf * st,  cf * cp, sp * st - cp * ct * sf,
         -cf * st,                sf,      cf * ct;
    return r;
}

// Euler-rate coupling matrix T mapping attitude rates to body rates,
// omega = T * [phi_dot, theta_dot, psi_dot]. Derived from the rotation
// sequence above: each rate contributes its axis expressed in the body frame.
// det(T) = cos(phi), so the singularity sits at phi = +-pi/2 for this
// sequence (roll, not pitch, is the middle rotation).
inline Mat3 euler_rate_matrix(const EulerAngles& a) {
    const double cf = std::cos(a.phi), sf = std::sin(a.phi);
    const double ct = std::cos(a.theta), st = std::sin(a.theta);
    Mat3 t;
    t << ct, 0, -cf * st,
         0,  1, sf,
         st, 0, cf * ct;
    return t;
}

// Attitude kinematics a_dot = T^-1 omega; throws at the gimbal-lock
// singularity cos(phi) = 0.
inline Vec3 euler_rates(const EulerAngles& a, const Vec3& omega) {
    if (std::abs(std::cos(a.phi)) < 1e-9)
        throw numerical_error(
            "gimbal lock: cos(phi) ~ 0, Euler rate matrix is singular");
    return euler_rate_matrix(a).partialPivLu().solve(omega);
}

}  // namespace sindyquad
