#pragma once

#include "sindyquad/types.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace sindyquad {

// Declarative description of the candidate-function library: joint
// polynomials in states and controls up to `degree`, sin/cos of selected
// states (attitude angles), and optionally each control times each of those
// Fourier terms so thrust-attitude products are expressible.
struct LibrarySpec {
    int degree = 2;
    std::vector<int> fourier_states = {2};  // indices into the state vector
    bool control_times_fourier = true;
    bool include_bias = true;
};

namespace detail {

struct LibraryTerm {
    enum class Kind { Bias, Monomial, Sin, Cos, CtrlSin, CtrlCos };
    Kind kind = Kind::Bias;
    std::vector<int> vars;  // Monomial: indices into [states..., controls...]
    int state = 0;          // Sin/Cos/Ctrl*: state index
    int control = 0;        // Ctrl*: control index
};

// Non-decreasing index tuples of length `degree`, lexicographic, so the
// degree-2 block over 8 variables runs y*y, y*z, ..., u2*u2.
inline void enumerate_monomials(int nvars, int degree, std::vector<int>& cur,
                                std::vector<LibraryTerm>& out) {
    if (static_cast<int>(cur.size()) == degree) {
        LibraryTerm t;
        t.kind = LibraryTerm::Kind::Monomial;
        t.vars = cur;
        out.push_back(std::move(t));
        return;
    }
    const int start = cur.empty() ? 0 : cur.back();
    for (int i = start; i < nvars; ++i) {
        cur.push_back(i);
        enumerate_monomials(nvars, degree, cur, out);
        cur.pop_back();
    }
}

inline std::vector<LibraryTerm> enumerate_terms(const LibrarySpec& spec,
                                                int n_states,
                                                int n_controls) {
    for (int f : spec.fourier_states)
        if (f < 0 || f >= n_states)
            throw config_error("library fourier state index " +
                               std::to_string(f) + " out of range");
    if (spec.degree < 0)
        throw config_error("library degree must be nonnegative");

    std::vector<LibraryTerm> terms;
    if (spec.include_bias) terms.push_back({});
    std::vector<int> cur;
    for (int d = 1; d <= spec.degree; ++d)
        enumerate_monomials(n_states + n_controls, d, cur, terms);
    for (int f : spec.fourier_states) {
        LibraryTerm s;
        s.kind = LibraryTerm::Kind::Sin;
        s.state = f;
        terms.push_back(s);
        s.kind = LibraryTerm::Kind::Cos;
        terms.push_back(s);
    }
    if (spec.control_times_fourier) {
        for (int f : spec.fourier_states)
            for (int c = 0; c < n_controls; ++c) {
                LibraryTerm s;
                s.state = f;
                s.control = c;
                s.kind = LibraryTerm::Kind::CtrlSin;
                terms.push_back(s);
                s.kind = LibraryTerm::Kind::CtrlCos;
                terms.push_back(s);
            }
    }
    if (terms.empty())
        throw config_error(
            "library spec produces no columns (degree 0, no fourier, no bias)");
    return terms;
}

inline std::string term_label(const LibraryTerm& t,
                              const std::vector<std::string>& states,
                              const std::vector<std::string>& controls) {
    auto var_name = [&](int i) {
        return i < static_cast<int>(states.size())
                   ? states[static_cast<size_t>(i)]
                   : controls[static_cast<size_t>(i) - states.size()];
    };
    switch (t.kind) {
        case LibraryTerm::Kind::Bias:
            return "1";
        case LibraryTerm::Kind::Monomial: {
            std::string s = var_name(t.vars[0]);
            for (size_t i = 1; i < t.vars.size(); ++i)
                s += "*" + var_name(t.vars[i]);
            return s;
        }
        case LibraryTerm::Kind::Sin:
            return "sin(" + states[static_cast<size_t>(t.state)] + ")";
        case LibraryTerm::Kind::Cos:
            return "cos(" + states[static_cast<size_t>(t.state)] + ")";
        case LibraryTerm::Kind::CtrlSin:
            return controls[static_cast<size_t>(t.control)] + "*sin(" +
                   states[static_cast<size_t>(t.state)] + ")";
        case LibraryTerm::Kind::CtrlCos:
            return controls[static_cast<size_t>(t.control)] + "*cos(" +
                   states[static_cast<size_t>(t.state)] + ")";
    }
    return "?";
}

inline double eval_term(const LibraryTerm& t, const double* x,
                        const double* u, int n_states) {
    auto value = [&](int i) {
        return i < n_states ? x[i] : u[i - n_states];
    };
    switch (t.kind) {
        case LibraryTerm::Kind::Bias:
            return 1.0;
        case LibraryTerm::Kind::Monomial: {
            double v = 1.0;
            for (int i : t.vars) v *= value(i);
            return v;
        }
        case LibraryTerm::Kind::Sin:
            return std::sin(x[t.state]);
        case LibraryTerm::Kind::Cos:
            return std::cos(x[t.state]);
        case LibraryTerm::Kind::CtrlSin:
            return u[t.control] * std::sin(x[t.state]);
        case LibraryTerm::Kind::CtrlCos:
            return u[t.control] * std::cos(x[t.state]);
    }
    return 0.0;
}

}  // namespace detail

struct CandidateLibrary {
    Mat Theta;
    std::vector<std::string> labels;
    LibrarySpec spec;
};

inline std::vector<std::string> library_labels(
    const LibrarySpec& spec, const std::vector<std::string>& states,
    const std::vector<std::string>& controls) {
    const auto terms = detail::enumerate_terms(
        spec, static_cast<int>(states.size()),
        static_cast<int>(controls.size()));
    std::vector<std::string> labels;
    labels.reserve(terms.size());
    for (const auto& t : terms)
        labels.push_back(detail::term_label(t, states, controls));
    return labels;
}

// Evaluate every candidate term at every snapshot row.
inline CandidateLibrary build_library(
    const Mat& X, const Mat& U, const LibrarySpec& spec,
    const std::vector<std::string>& states,
    const std::vector<std::string>& controls) {
    if (X.rows() < 1) throw data_error("library needs at least one snapshot");
    if (X.rows() != U.rows())
        throw data_error("state and control row counts differ");

    const int n = static_cast<int>(X.cols());
    const auto terms =
        detail::enumerate_terms(spec, n, static_cast<int>(U.cols()));

    CandidateLibrary lib;
    lib.spec = spec;
    lib.labels.reserve(terms.size());
    for (const auto& t : terms)
        lib.labels.push_back(detail::term_label(t, states, controls));
    lib.Theta.resize(X.rows(), static_cast<Eigen::Index>(terms.size()));
    Eigen::RowVectorXd xr, ur;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        xr = X.row(i);
        ur = U.row(i);
        for (size_t j = 0; j < terms.size(); ++j)
            lib.Theta(i, static_cast<Eigen::Index>(j)) =
                detail::eval_term(terms[j], xr.data(), ur.data(), n);
    }
    return lib;
}

// Single-sample library row for simulating a fitted model.
class LibraryRowEvaluator {
   public:
    LibraryRowEvaluator(const LibrarySpec& spec, int n_states, int n_controls)
        : terms_(detail::enumerate_terms(spec, n_states, n_controls)),
          n_states_(n_states) {}

    Eigen::Index size() const {
        return static_cast<Eigen::Index>(terms_.size());
    }

    void eval(const Vec6& x, const Vec2& u, Eigen::RowVectorXd& row) const {
        row.resize(size());
        for (size_t j = 0; j < terms_.size(); ++j)
            row[static_cast<Eigen::Index>(j)] =
                detail::eval_term(terms_[j], x.data(), u.data(), n_states_);
    }

   private:
    std::vector<detail::LibraryTerm> terms_;
    int n_states_;
};

}  // namespace sindyquad
