#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace sindyquad {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

// Error taxonomy; the CLI maps each family to a distinct exit code.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadParams {
    double mass = 0.18;      // kg
    double arm_length = 0.086;  // m, rotor axis to center of mass
    double jx = 0.00025;     // kg m^2
    double jy = 0.00025;     // only used on the 6-DOF path
    double jz = 0.0005;
    double gravity = 9.81;   // m/s^2
    double gamma = 0.01;     // motor moment/force constant ratio K_M/K_F

    void validate() const {
        if (!(mass > 0) || !(arm_length > 0) || !(jx > 0) || !(jy > 0) ||
            !(jz > 0) || !(gravity > 0))
            throw config_error("quad params must be positive (mass, arm_length, "
                               "inertias, gravity)");
    }
};

struct EulerAngles {
    double phi = 0;    // roll
    double theta = 0;  // pitch
    double psi = 0;    // yaw
};

// Full rigid-body state: inertial position, body-frame velocity, attitude,
// body rates. Matches the usual Newton-Euler bookkeeping where translational
// dynamics are written in the body frame.
struct RigidBodyState6 {
    Vec3 position = Vec3::Zero();       // r in inertial frame
    Vec3 velocity_body = Vec3::Zero();  // r_dot in body frame
    EulerAngles attitude;
    Vec3 rates = Vec3::Zero();          // omega = (p, q, r)
};

struct RigidBodyDeriv6 {
    Vec3 position_dot;       // inertial velocity
    Vec3 velocity_body_dot;  // body-frame acceleration
    Vec3 attitude_dot;       // Euler angle rates (phi, theta, psi)
    Vec3 rates_dot;          // body angular acceleration
};

// Planar (3-DOF) state, fixed ordering [y, z, phi, y_dot, z_dot, phi_dot].
using PlanarState = Vec6;

inline const std::vector<std::string>& planar_state_names() {
    static const std::vector<std::string> names = {"y",     "z",     "phi",
                                                   "y_dot", "z_dot", "phi_dot"};
    return names;
}

inline const std::vector<std::string>& planar_control_names() {
    static const std::vector<std::string> names = {"u1", "u2"};
    return names;
}

// Time-aligned snapshot matrices from one simulation: row k holds the state
// x_k and the control u_k applied over [t_k, t_k + dt).
struct SnapshotSet {
    Vec t;
    Mat X;     // m x n states
    Mat U;     // m x q controls
    Mat Xdot;  // m x n derivatives; empty until filled
    double dt = 0;
    std::vector<std::string> state_names;
    std::vector<std::string> control_names;

    Eigen::Index rows() const { return X.rows(); }
    bool has_xdot() const { return Xdot.size() > 0; }
};

}  // namespace sindyquad
