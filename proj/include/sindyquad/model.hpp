#pragma once

#include "sindyquad/integrate.hpp"
#include "sindyquad/library.hpp"
#include "sindyquad/types.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

namespace sindyquad {

// A fitted (or hand-built) sparse model x_dot = Theta(x, u) * Omega.
struct SparseModel {
    Mat omega;  // p x n coefficients
    std::vector<std::string> labels;
    std::vector<std::string> state_names;
    std::vector<std::string> control_names;
    LibrarySpec spec;
    double lambda = 0;
    std::string optimizer = "sr3";

    std::set<std::string> support(Eigen::Index state, double tol = 0) const {
        std::set<std::string> s;
        for (Eigen::Index i = 0; i < omega.rows(); ++i)
            if (std::abs(omega(i, state)) > tol)
                s.insert(labels[static_cast<size_t>(i)]);
        return s;
    }

    Eigen::Index support_size(double tol = 0) const {
        return (omega.cwiseAbs().array() > tol).count();
    }
};

// The physical planar model expressed in library coordinates: exactly the
// coefficients a perfect identification should recover.
inline SparseModel ground_truth_model(const QuadParams& p,
                                      const LibrarySpec& spec = {}) {
    SparseModel m;
    m.spec = spec;
    m.state_names = planar_state_names();
    m.control_names = planar_control_names();
    m.labels = library_labels(spec, m.state_names, m.control_names);
    m.optimizer = "analytic";
    m.omega = Mat::Zero(static_cast<Eigen::Index>(m.labels.size()), 6);

    auto idx = [&](const std::string& label) {
        for (size_t i = 0; i < m.labels.size(); ++i)
            if (m.labels[i] == label) return static_cast<Eigen::Index>(i);
        throw data_error("library spec lacks required term '" + label + "'");
    };
    m.omega(idx("y_dot"), 0) = 1.0;
    m.omega(idx("z_dot"), 1) = 1.0;
    m.omega(idx("phi_dot"), 2) = 1.0;
    m.omega(idx("u1*sin(phi)"), 3) = -1.0 / p.mass;
    m.omega(idx("1"), 4) = -p.gravity;
    m.omega(idx("u1*cos(phi)"), 4) = 1.0 / p.mass;
    m.omega(idx("u2"), 5) = 1.0 / p.jx;
    return m;
}

// Evaluate the model right-hand side at one sample.
class ModelPlant {
   public:
    explicit ModelPlant(const SparseModel& m)
        : model_(m),
          eval_(m.spec, static_cast<int>(m.state_names.size()),
                static_cast<int>(m.control_names.size())) {
        if (eval_.size() != m.omega.rows())
            throw data_error("model coefficient rows do not match its library");
    }

    Vec6 operator()(const Vec6& x, const Vec2& u) const {
        eval_.eval(x, u, row_);
        return (row_ * model_.omega).transpose();
    }

   private:
    const SparseModel& model_;
    LibraryRowEvaluator eval_;
    mutable Eigen::RowVectorXd row_;
};

inline Vec6 predict_derivative(const SparseModel& m, const Vec6& x,
                               const Vec2& u) {
    return ModelPlant(m)(x, u);
}

// Closed-loop simulation with the fitted model as the plant; everything else
// (controller, reference, integrator) is identical to the ground-truth
// rollout so trajectories are directly comparable.
inline SnapshotSet simulate_model(const SparseModel& m,
                                  const TrajectoryCase& c,
                                  const PdGains& gains, const QuadParams& p,
                                  double dt, int steps) {
    const ModelPlant plant(m);
    return rollout_with_plant(plant, c, gains, p, dt, steps);
}

// Table-style rendering, one equation per state derivative with coefficients
// to three decimals, e.g. "z_ddot = -9.810 + 5.556 u1*cos(phi)".
inline std::vector<std::string> render_equations(const SparseModel& m) {
    static const char* const kDerivNames[] = {"y_dot",  "z_dot",  "phi_dot",
                                              "y_ddot", "z_ddot", "phi_ddot"};
    std::vector<std::string> eqs;
    for (Eigen::Index j = 0; j < m.omega.cols(); ++j) {
        std::string rhs;
        for (Eigen::Index i = 0; i < m.omega.rows(); ++i) {
            const double c = m.omega(i, j);
            if (c == 0) continue;
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.3f", std::abs(c));
            if (rhs.empty())
                rhs += (c < 0) ? "-" : "";
            else
                rhs += (c < 0) ? " - " : " + ";
            rhs += buf;
            const std::string& label = m.labels[static_cast<size_t>(i)];
            if (label != "1") rhs += " " + label;
        }
        if (rhs.empty()) rhs = "0";
        const std::string lhs =
            j < 6 ? kDerivNames[j]
                  : "d(" + m.state_names[static_cast<size_t>(j)] + ")/dt";
        eqs.push_back(lhs + " = " + rhs);
    }
    return eqs;
}

}  // namespace sindyquad
