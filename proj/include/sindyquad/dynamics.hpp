#pragma once

#include "sindyquad/rotation.hpp"
#include "sindyquad/types.hpp"

#include <cmath>

namespace sindyquad {

// Planar quadrotor equations of motion in the y-z plane with roll phi:
//   y_ddot   = -(u1/m) sin(phi)
//   z_ddot   = -g + (u1/m) cos(phi)
//   phi_ddot = u2/Jx
// u1 is the net thrust, u2 the roll moment. No thrust clamping here; any
// saturation is the controller's business.
inline Vec6 planar_derivative(const PlanarState& x, const Vec2& u,
                              const QuadParams& p) {
    const double phi = x[2];
    Vec6 dx;
    dx[0] = x[3];
    dx[1] = x[4];
    dx[2] = x[5];
    dx[3] = -(u[0] / p.mass) * std::sin(phi);
    dx[4] = -p.gravity + (u[0] / p.mass) * std::cos(phi);
    dx[5] = u[1] / p.jx;
    return dx;
}

// Full 6-DOF Newton-Euler derivative. U = [u1, u2, u3, u4] = net thrust and
// the three body moments. Gravity is inertial and thrust is along body +z;
// the sum of forces is rotated into the body frame before use in the
// body-frame acceleration line, keeping the frames consistent.
inline RigidBodyDeriv6 six_dof_derivative(const RigidBodyState6& s,
                                          const Vec4& u,
                                          const QuadParams& p) {
    const Mat3 r = rotation_matrix(s.attitude);
    const Vec3 force_inertial =
        Vec3(0, 0, -p.mass * p.gravity) + r * Vec3(0, 0, u[0]);
    const Vec3 inertia(p.jx, p.jy, p.jz);
    const Vec3 moments(u[1], u[2], u[3]);

    RigidBodyDeriv6 d;
    d.position_dot = r * s.velocity_body;
    d.velocity_body_dot = (r.transpose() * force_inertial) / p.mass -
                          s.rates.cross(s.velocity_body);
    d.attitude_dot = euler_rates(s.attitude, s.rates);
    d.rates_dot =
        (moments - s.rates.cross(inertia.asDiagonal() * s.rates)).array() /
        inertia.array();
    return d;
}

// Rotor thrusts -> control inputs, U = M * T with
//   M = [ 1   1   1   1
//         0   L   0  -L
//        -L   0   L   0
//         g  -g   g  -g ]   (g = gamma = K_M/K_F)
inline Mat4 mixing_matrix(const QuadParams& p) {
    const double l = p.arm_length, g = p.gamma;
    Mat4 m;
    m << 1, 1, 1, 1,
         0, l, 0, -l,
         -l, 0, l, 0,
         g, -g, g, -g;
    return m;
}

inline Vec4 motor_mixing(const Vec4& thrusts, const QuadParams& p) {
    return mixing_matrix(p) * thrusts;
}

inline Vec4 inverse_mixing(const Vec4& u, const QuadParams& p) {
    if (p.arm_length == 0 || p.gamma == 0)
        throw numerical_error(
            "mixing matrix is singular (arm_length or gamma is zero)");
    return mixing_matrix(p).partialPivLu().solve(u);
}

}  // namespace sindyquad
