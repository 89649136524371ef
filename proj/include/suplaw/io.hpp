// Copyright 2026 The suplaw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON and CSV emission and ingestion. Numbers are printed with 17
// significant digits so identical results give byte-identical files.
// Complex matrices serialize as nested arrays of [re, im] pairs; rows are
// output modes, columns input modes, both numbered from 1 in headers.

#include "suplaw/config.hpp"
#include "suplaw/oracle.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <ostream>

namespace suplaw::io {

using Json = nlohmann::ordered_json;

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline Json matrix_to_json(const ComplexMatrix &m) {
    Json rows = Json::array();
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(Json::array({m(k, j).real(), m(k, j).imag()}));
        }
        rows.push_back(row);
    }
    return rows;
}

inline ComplexMatrix matrix_from_json(const Json &j) {
    if (!j.is_array() || j.empty() || !j.front().is_array()) {
        throw ConfigError("matrix JSON must be a nested array");
    }
    const std::size_t rows = j.size();
    const std::size_t cols = j.front().size();
    ComplexMatrix m(rows, cols);
    for (std::size_t k = 0; k < rows; ++k) {
        if (!j[k].is_array() || j[k].size() != cols) {
            throw ConfigError("matrix JSON has ragged rows");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            const Json &e = j[k][c];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                throw ConfigError("matrix JSON entries must be [re, im] pairs");
            }
            m(k, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

inline void write_real_plane_csv(std::ostream &os, const RealMatrix &m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        os << (j ? "," : "") << "in" << j + 1;
    }
    os << "\n";
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            os << (j ? "," : "") << fmt(m(k, j));
        }
        os << "\n";
    }
}

/// Amplitude |U| and phase Arg(U) as two CSV planes.
inline void write_matrix_csv(std::ostream &amplitude, std::ostream &phase, const ComplexMatrix &m) {
    write_real_plane_csv(amplitude, m.cwiseAbs());
    RealMatrix ph(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            ph(k, j) = std::arg(m(k, j));
        }
    }
    write_real_plane_csv(phase, ph);
}

inline ComplexMatrix read_matrix_csv(std::istream &amplitude, std::istream &phase) {
    RealMatrix a = ExperimentFile::read_real_csv(amplitude, "amplitude plane");
    RealMatrix p = ExperimentFile::read_real_csv(phase, "phase plane");
    if (a.rows() != p.rows() || a.cols() != p.cols()) {
        throw ConfigError("amplitude and phase planes differ in shape");
    }
    ComplexMatrix m(a.rows(), a.cols());
    for (Eigen::Index k = 0; k < a.rows(); ++k) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            m(k, j) = std::polar(a(k, j), p(k, j));
        }
    }
    return m;
}

struct CountMatrix {
    RealMatrix counts;
    Eigen::Matrix<bool, -1, -1> mask;  // false where the cell was empty
    std::vector<std::string> inputs;
};

/// Single-photon count rates: a header row naming the input modes, then one
/// row per output mode. Empty cells are masked.
inline CountMatrix read_count_csv(std::istream &in) {
    std::string line;
    CountMatrix out;
    if (!std::getline(in, line)) {
        throw ConfigError("count CSV is empty");
    }
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            out.inputs.push_back(cell);
        }
    }
    std::vector<std::vector<std::optional<double>>> rows;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::vector<std::optional<double>> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            if (cell.find_first_not_of(" \t\r") == std::string::npos) {
                row.emplace_back();
                continue;
            }
            try {
                row.emplace_back(std::stod(cell));
            } catch (const std::exception &) {
                throw ConfigError("count CSV: non-numeric entry '" + cell + "'");
            }
        }
        if (!line.empty() && line.back() == ',') {
            row.emplace_back();
        }
        if (row.size() != out.inputs.size()) {
            throw ConfigError("count CSV: row length does not match the header");
        }
        rows.push_back(std::move(row));
    }
    const auto n = static_cast<Eigen::Index>(rows.size());
    out.counts = RealMatrix::Zero(n, static_cast<Eigen::Index>(out.inputs.size()));
    out.mask = Eigen::Matrix<bool, -1, -1>::Constant(out.counts.rows(), out.counts.cols(), true);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index j = 0; j < out.counts.cols(); ++j) {
            if (rows[k][j]) {
                out.counts(k, j) = *rows[k][j];
            } else {
                out.mask(k, j) = false;
            }
        }
    }
    return out;
}

inline Json jsa_to_json(const SpectralAmplitude &s) {
    Json re = Json::array();
    Json im = Json::array();
    for (int i = 0; i < s.size(); ++i) {
        Json r = Json::array();
        Json m = Json::array();
        for (int j = 0; j < s.size(); ++j) {
            r.push_back(s.amps(i, j).real());
            m.push_back(s.amps(i, j).imag());
        }
        re.push_back(r);
        im.push_back(m);
    }
    Json j;
    j["grid_rad_per_ps"] = s.grid.points;
    j["re"] = re;
    j["im"] = im;
    j["exchange_visibility"] = pair_exchange_visibility(s);
    if (s.warning) {
        j["warning"] = *s.warning;
    }
    return j;
}

/// Long format: one row per grid point pair.
inline void write_jsa_csv(std::ostream &os, const SpectralAmplitude &s) {
    os << "omega_1,omega_2,re,im\n";
    for (int i = 0; i < s.size(); ++i) {
        for (int j = 0; j < s.size(); ++j) {
            os << fmt(s.grid.points[i]) << "," << fmt(s.grid.points[j]) << "," << fmt(s.amps(i, j).real()) << ","
               << fmt(s.amps(i, j).imag()) << "\n";
        }
    }
}

namespace detail {

inline SpectralAmplitude jsa_from_points(const std::vector<double> &points, const ComplexMatrix &amps) {
    const int d = static_cast<int>(points.size());
    if (d < 2 || amps.rows() != d || amps.cols() != d) {
        throw ConfigError("JSA: amplitude matrix does not match the grid");
    }
    FrequencyGrid g = FrequencyGrid::uniform(points.front(), points.back(), d);
    for (int i = 0; i < d; ++i) {
        if (std::abs(g.points[i] - points[i]) > 1e-9 * std::max(1.0, std::abs(points[i]))) {
            throw ConfigError("JSA: grid points are not uniformly spaced");
        }
    }
    return SpectralAmplitude::from_grid_matrix(g, amps * g.weight());
}

}  // namespace detail

/// Inverse of jsa_to_json; the amplitude is renormalized on its grid.
inline SpectralAmplitude jsa_from_json(const Json &j) {
    if (!j.contains("grid_rad_per_ps") || !j.contains("re") || !j.contains("im")) {
        throw ConfigError("JSA JSON needs grid_rad_per_ps, re and im");
    }
    auto points = j["grid_rad_per_ps"].get<std::vector<double>>();
    auto re = j["re"].get<std::vector<std::vector<double>>>();
    auto im = j["im"].get<std::vector<std::vector<double>>>();
    const std::size_t d = points.size();
    if (re.size() != d || im.size() != d) {
        throw ConfigError("JSA JSON: planes do not match the grid");
    }
    ComplexMatrix amps(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        if (re[i].size() != d || im[i].size() != d) {
            throw ConfigError("JSA JSON: ragged plane");
        }
        for (std::size_t k = 0; k < d; ++k) {
            amps(i, k) = Complex(re[i][k], im[i][k]);
        }
    }
    return detail::jsa_from_points(points, amps);
}

/// Inverse of write_jsa_csv (rows in omega_1-major order).
inline SpectralAmplitude read_jsa_csv(std::istream &in) {
    RealMatrix rows = ExperimentFile::read_real_csv(in, "JSA CSV");
    if (rows.cols() != 4) {
        throw ConfigError("JSA CSV needs columns omega_1, omega_2, re, im");
    }
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(rows.rows()))));
    if (d * d != rows.rows()) {
        throw ConfigError("JSA CSV: row count is not a square");
    }
    std::vector<double> points(d);
    ComplexMatrix amps(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        points[i] = rows(i, 1);
        for (Eigen::Index k = 0; k < d; ++k) {
            const Eigen::Index r = i * d + k;
            if (rows(r, 0) != rows(i * d, 0) || rows(r, 1) != rows(k, 1)) {
                throw ConfigError("JSA CSV: rows are not in grid order");
            }
            amps(i, k) = Complex(rows(r, 2), rows(r, 3));
        }
    }
    return detail::jsa_from_points(points, amps);
}

inline Json distribution_to_json(const OutputDistribution &d) {
    Json j;
    j["fold"] = d.fold;
    j["modes"] = d.modes;
    j["labels"] = d.labels;
    if (d.modes % 2 == 1) {
        j["degree_of_violation"] = degree_of_violation(d);
    }
    j["raw_total"] = d.raw_total;
    j["max_norm_defect"] = d.max_norm_defect;
    Json fractions;
    for (const auto &l : d.labels) {
        fractions[l] = d.fraction(l);
    }
    j["fractions"] = fractions;
    Json rows = Json::array();
    for (const auto &[p, v] : d.contributions) {
        Json row;
        row["pattern"] = p.fired;
        if (d.modes % 2 == 1) {
            row["suppressed"] = is_suppressed(p.occupation(d.modes));
        }
        row["p_total"] = d.total(p);
        Json parts;
        for (std::size_t k = 0; k < d.labels.size(); ++k) {
            parts[d.labels[k]] = v[k];
        }
        row["contributions"] = parts;
        rows.push_back(row);
    }
    j["patterns"] = rows;
    return j;
}

/// Columns: pattern, p_total, then p_<label> per contribution.
inline void write_distribution_csv(std::ostream &os, const OutputDistribution &d) {
    os << "pattern,p_total";
    for (const auto &l : d.labels) {
        os << ",p_" << l;
    }
    os << "\n";
    for (const auto &[p, v] : d.contributions) {
        os << '"' << p.str() << '"' << "," << fmt(d.total(p));
        for (double x : v) {
            os << "," << fmt(x);
        }
        os << "\n";
    }
}

inline Json records_to_json(const std::vector<InputStateRecord> &recs) {
    Json rows = Json::array();
    for (const auto &r : recs) {
        Json row;
        row["channel_occupation"] = r.channel_occupation;
        row["N"] = r.photons;
        row["R"] = r.occupation.counts;
        row["p_gen"] = r.p_gen;
        row["p_gen_norm"] = r.p_gen_norm;
        rows.push_back(row);
    }
    return rows;
}

inline void write_records_csv(std::ostream &os, const std::vector<InputStateRecord> &recs) {
    os << "channel_occupation,N,R,p_gen,p_gen_norm\n";
    for (const auto &r : recs) {
        os << "\"(" << r.channel_occupation[0] << "," << r.channel_occupation[1] << "," << r.channel_occupation[2]
           << "," << r.channel_occupation[3] << ")\"," << r.photons << ",\"" << r.occupation.str() << "\","
           << fmt(r.p_gen) << "," << fmt(r.p_gen_norm) << "\n";
    }
}

inline Json scan_to_json(const HomScan &s) {
    Json pts = Json::array();
    for (const auto &[t, p] : s.points) {
        pts.push_back(Json::array({t, p}));
    }
    Json j;
    j["points"] = pts;
    j["distinguishable"] = s.distinguishable;
    return j;
}

inline void write_scan_csv(std::ostream &os, const HomScan &s) {
    os << "tau_ps,probability\n";
    for (const auto &[t, p] : s.points) {
        os << fmt(t) << "," << fmt(p) << "\n";
    }
}

inline Json oracle_report_to_json(const oracle::OracleReport &r) {
    Json j;
    j["maxAbsDiff"] = r.max_abs_diff;
    j["worstCase"] = r.worst_case;
    j["casesChecked"] = r.cases_checked;
    j["maxOverlapDiff"] = r.max_overlap_diff;
    j["overlapsChecked"] = r.overlaps_checked;
    return j;
}

}  // namespace suplaw::io
