#pragma once

#include "sindyquad/evaluate.hpp"
#include "sindyquad/model.hpp"
#include "sindyquad/types.hpp"

#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace sindyquad {

using json = nlohmann::ordered_json;

namespace detail {

// Full-precision decimal rendering; 17 significant digits round-trip any
// double exactly.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::ofstream open_for_write(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw data_error("cannot open '" + path + "' for writing");
    return f;
}

inline double parse_double(const std::string& cell, Eigen::Index row,
                           size_t col, const std::string& path) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0')
        throw data_error(path + " row " + std::to_string(row + 2) +
                         ", column " + std::to_string(col + 1) +
                         ": cannot parse '" + cell + "' as a number");
    return v;
}

}  // namespace detail

inline std::string snapshot_csv_header(const SnapshotSet& ss) {
    std::string h = "t";
    for (const auto& n : ss.state_names) h += "," + n;
    for (const auto& n : ss.control_names) h += "," + n;
    return h;
}

inline void write_snapshots_csv(const std::string& path,
                                const SnapshotSet& ss) {
    auto f = detail::open_for_write(path);
    f << snapshot_csv_header(ss) << "\n";
    for (Eigen::Index k = 0; k < ss.rows(); ++k) {
        f << detail::format_double(ss.t[k]);
        for (Eigen::Index j = 0; j < ss.X.cols(); ++j)
            f << "," << detail::format_double(ss.X(k, j));
        for (Eigen::Index j = 0; j < ss.U.cols(); ++j)
            f << "," << detail::format_double(ss.U(k, j));
        f << "\n";
    }
    if (!f) throw data_error("write to '" + path + "' failed");
}

inline SnapshotSet read_snapshots_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw data_error("cannot open '" + path + "' for reading");

    SnapshotSet ss;
    ss.state_names = planar_state_names();
    ss.control_names = planar_control_names();
    const std::string expected = snapshot_csv_header(ss);

    std::string line;
    if (!std::getline(f, line)) throw data_error(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected)
        throw data_error(path + ": bad header, expected '" + expected +
                         "' but got '" + line + "'");

    std::vector<std::array<double, 9>> rows;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<double, 9> row{};
        std::stringstream cells(line);
        std::string cell;
        size_t col = 0;
        while (std::getline(cells, cell, ',')) {
            if (col >= row.size())
                throw data_error(path + " row " +
                                 std::to_string(rows.size() + 2) +
                                 ": too many columns");
            row[col] = detail::parse_double(
                cell, static_cast<Eigen::Index>(rows.size()), col, path);
            ++col;
        }
        if (col != row.size())
            throw data_error(path + " row " + std::to_string(rows.size() + 2) +
                             ": expected 9 columns, got " +
                             std::to_string(col));
        rows.push_back(row);
    }
    if (rows.size() < 2)
        throw data_error(path + ": need at least 2 snapshot rows");

    const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
    ss.t.resize(m);
    ss.X.resize(m, 6);
    ss.U.resize(m, 2);
    for (Eigen::Index k = 0; k < m; ++k) {
        const auto& r = rows[static_cast<size_t>(k)];
        ss.t[k] = r[0];
        for (int j = 0; j < 6; ++j) ss.X(k, j) = r[static_cast<size_t>(j) + 1];
        ss.U(k, 0) = r[7];
        ss.U(k, 1) = r[8];
    }
    ss.dt = ss.t[1] - ss.t[0];
    for (Eigen::Index k = 0; k + 1 < m; ++k)
        if (std::abs(ss.t[k + 1] - ss.t[k] - ss.dt) > 1e-9)
            throw data_error(path + " row " + std::to_string(k + 3) +
                             ": non-uniform time step");
    return ss;
}

inline json library_spec_to_json(const LibrarySpec& spec) {
    return json{{"degree", spec.degree},
                {"fourier_states", spec.fourier_states},
                {"control_times_fourier", spec.control_times_fourier},
                {"include_bias", spec.include_bias}};
}

inline LibrarySpec library_spec_from_json(const json& j) {
    LibrarySpec spec;
    spec.degree = j.at("degree").get<int>();
    spec.fourier_states = j.at("fourier_states").get<std::vector<int>>();
    spec.control_times_fourier = j.at("control_times_fourier").get<bool>();
    spec.include_bias = j.at("include_bias").get<bool>();
    return spec;
}

inline json model_to_json(const SparseModel& m) {
    json coeffs = json::array();
    for (Eigen::Index i = 0; i < m.omega.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.omega.cols(); ++j)
            row.push_back(m.omega(i, j));
        coeffs.push_back(std::move(row));
    }
    return json{{"states", m.state_names},
                {"controls", m.control_names},
                {"labels", m.labels},
                {"lambda", m.lambda},
                {"optimizer", m.optimizer},
                {"library", library_spec_to_json(m.spec)},
                {"coefficients", std::move(coeffs)},
                {"equations", render_equations(m)}};
}

inline void write_model_json(const std::string& path, const SparseModel& m) {
    auto f = detail::open_for_write(path);
    f << model_to_json(m).dump(2) << "\n";
    if (!f) throw data_error("write to '" + path + "' failed");
}

inline SparseModel read_model_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw data_error("cannot open '" + path + "' for reading");
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw data_error(path + ": invalid JSON (" + e.what() + ")");
    }
    try {
        SparseModel m;
        m.state_names = j.at("states").get<std::vector<std::string>>();
        m.control_names = j.at("controls").get<std::vector<std::string>>();
        m.labels = j.at("labels").get<std::vector<std::string>>();
        m.lambda = j.at("lambda").get<double>();
        m.optimizer = j.at("optimizer").get<std::string>();
        m.spec = library_spec_from_json(j.at("library"));
        const auto& coeffs = j.at("coefficients");
        const Eigen::Index p = static_cast<Eigen::Index>(coeffs.size());
        if (p != static_cast<Eigen::Index>(m.labels.size()))
            throw data_error(path + ": coefficient rows (" +
                             std::to_string(p) + ") do not match labels (" +
                             std::to_string(m.labels.size()) + ")");
        const Eigen::Index n =
            p > 0 ? static_cast<Eigen::Index>(coeffs.at(0).size()) : 0;
        m.omega.resize(p, n);
        for (Eigen::Index i = 0; i < p; ++i) {
            const auto& row = coeffs.at(static_cast<size_t>(i));
            if (static_cast<Eigen::Index>(row.size()) != n)
                throw data_error(path + ": ragged coefficient matrix");
            for (Eigen::Index c = 0; c < n; ++c)
                m.omega(i, c) = row.at(static_cast<size_t>(c)).get<double>();
        }
        return m;
    } catch (const json::exception& e) {
        throw data_error(path + ": bad model document (" + e.what() + ")");
    }
}

inline void write_sweep_csv(const std::string& path, const SweepResult& sw) {
    auto f = detail::open_for_write(path);
    f << "lambda,rmse_y,rmse_z,rmse_phi,rmse_ydot,rmse_zdot,rmse_phidot,"
         "support_size,support_match\n";
    for (const auto& rec : sw.records) {
        f << detail::format_double(rec.lambda);
        for (int j = 0; j < 6; ++j)
            f << ","
              << (rec.diverged ? "nan"
                               : detail::format_double(rec.rmse_per_state[j]));
        f << "," << rec.support_size << "," << (rec.support_match ? 1 : 0)
          << "\n";
    }
    if (!f) throw data_error("write to '" + path + "' failed");
}

inline json comparison_to_json(const ComparisonReport& rep) {
    json rows = json::array();
    for (const auto& row : rep.rows) {
        json terms = json::array();
        for (const auto& t : row.terms)
            terms.push_back(json{{"term", t.label},
                                 {"model", t.model_coef},
                                 {"reference", t.truth_coef},
                                 {"delta", t.delta}});
        rows.push_back(json{{"state", row.state},
                            {"terms", std::move(terms)},
                            {"support_match", row.match}});
    }
    return json{{"rows", std::move(rows)},
                {"support_match", rep.support_match},
                {"max_relative_delta", rep.max_rel_delta}};
}

inline void write_json_file(const std::string& path, const json& j) {
    auto f = detail::open_for_write(path);
    f << j.dump(2) << "\n";
    if (!f) throw data_error("write to '" + path + "' failed");
}

inline void write_text_file(const std::string& path, const std::string& s) {
    auto f = detail::open_for_write(path);
    f << s;
    if (!f) throw data_error("write to '" + path + "' failed");
}

}  // namespace sindyquad
