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

// Experiment files: a TOML-style key/value format with [sections], plus the
// bundled presets.
//
//   [unitary]  kind = "jx" | "merged" | "beamsplitters", modes, time, amplitudes = "file.csv"
//   [source]   p_ab, p_cd, max_photons, jsa = "gaussian" | "separable",
//              pump_fwhm_nm, filter_fwhm_nm, center_nm, separation_ab_nm, separation_cd_nm
//   [wiring]   a, b, c, d (1-based input modes)
//   [loss]     eta = [..], output_efficiency = [..]
//   [scenario] name, delays_ps = [a, b, c, d], distinguishable_delay_ps
//   [grid]     points, span_fwhm
//   [caps]     max_transversal
//
// Widths and wavelengths are in nm, delays in ps, probabilities dimensionless.
// Modes are numbered from 1.

#include "suplaw/interference.hpp"

#include <filesystem>
#include <fstream>
#include <variant>

namespace suplaw {

using ConfigValue = std::variant<double, std::string, bool, std::vector<double>>;

/// Flat "section.key" -> value map read from the TOML-style subset.
class ConfigDocument {
   public:
    static ConfigDocument parse(std::istream &in, const std::string &source = "<input>") {
        ConfigDocument doc;
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto where = [&] { return source + ":" + std::to_string(lineno) + ": "; };
            line = strip_comment(line);
            line = trim(line);
            if (line.empty()) {
                continue;
            }
            if (line.front() == '[') {
                if (line.back() != ']') {
                    throw ConfigError(where() + "unterminated section header");
                }
                section = trim(line.substr(1, line.size() - 2));
                if (section.empty()) {
                    throw ConfigError(where() + "empty section name");
                }
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ConfigError(where() + "expected key = value");
            }
            std::string key = trim(line.substr(0, eq));
            std::string raw = trim(line.substr(eq + 1));
            if (key.empty() || raw.empty()) {
                throw ConfigError(where() + "expected key = value");
            }
            std::string full = section.empty() ? key : section + "." + key;
            if (doc.values_.count(full)) {
                throw ConfigError(where() + "duplicate key '" + full + "'");
            }
            try {
                doc.values_[full] = parse_value(raw);
            } catch (const ConfigError &e) {
                throw ConfigError(where() + e.what());
            }
        }
        return doc;
    }

    static ConfigDocument load(const std::string &path) {
        std::ifstream in(path);
        if (!in) {
            throw ConfigError("cannot open config file '" + path + "'");
        }
        return parse(in, path);
    }

    bool has(const std::string &key) const { return values_.count(key) != 0; }

    double number(const std::string &key, double fallback) const {
        return has(key) ? get<double>(key, "a number") : fallback;
    }
    int integer(const std::string &key, int fallback) const {
        double v = number(key, fallback);
        if (v != std::floor(v)) {
            throw ConfigError("'" + key + "' must be an integer");
        }
        return static_cast<int>(v);
    }
    std::string string(const std::string &key, const std::string &fallback) const {
        return has(key) ? get<std::string>(key, "a string") : fallback;
    }
    std::vector<double> list(const std::string &key, const std::vector<double> &fallback) const {
        return has(key) ? get<std::vector<double>>(key, "a list of numbers") : fallback;
    }

    /// Rejects keys outside `known`.
    void check_keys(const std::vector<std::string> &known) const {
        for (const auto &[k, v] : values_) {
            if (std::find(known.begin(), known.end(), k) == known.end()) {
                throw ConfigError("unknown config key '" + k + "'");
            }
        }
    }

   private:
    std::map<std::string, ConfigValue> values_;

    template <typename T>
    const T &get(const std::string &key, const char *what) const {
        const auto &v = values_.at(key);
        if (!std::holds_alternative<T>(v)) {
            throw ConfigError("'" + key + "' must be " + what);
        }
        return std::get<T>(v);
    }

    static std::string trim(const std::string &s) {
        auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) {
            return "";
        }
        auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    static std::string strip_comment(const std::string &s) {
        bool quoted = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"') {
                quoted = !quoted;
            } else if (s[i] == '#' && !quoted) {
                return s.substr(0, i);
            }
        }
        return s;
    }

    static double parse_number(const std::string &s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception &) {
            throw ConfigError("malformed number '" + s + "'");
        }
        if (used != s.size() || !std::isfinite(v)) {
            throw ConfigError("malformed number '" + s + "'");
        }
        return v;
    }

    static ConfigValue parse_value(const std::string &raw) {
        if (raw.front() == '"') {
            if (raw.size() < 2 || raw.back() != '"') {
                throw ConfigError("unterminated string");
            }
            return raw.substr(1, raw.size() - 2);
        }
        if (raw == "true" || raw == "false") {
            return raw == "true";
        }
        if (raw.front() == '[') {
            if (raw.back() != ']') {
                throw ConfigError("unterminated list");
            }
            std::vector<double> out;
            std::string body = trim(raw.substr(1, raw.size() - 2));
            std::stringstream ss(body);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (!item.empty()) {
                    out.push_back(parse_number(item));
                }
            }
            return out;
        }
        return parse_number(raw);
    }
};

/// Parsed experiment description; build() turns it into an ExperimentConfig.
struct ExperimentFile {
    std::string unitary_kind = "jx";
    int modes = 7;
    double time = kPi / 2;
    std::string amplitudes_path;

    double p_ab = 0.026;
    double p_cd = 0.033;
    int max_photons = 6;
    std::string jsa_model = "gaussian";
    double pump_fwhm_nm = 0.4;
    double filter_fwhm_nm = 3.0;
    double center_nm = 795.0;
    double separation_ab_nm = 0.625;
    double separation_cd_nm = 0.8;

    ChannelWiring wiring;
    std::vector<double> eta;
    std::vector<double> output_efficiency;

    Scenario scenario = Scenario::mutually_indistinguishable;
    std::optional<std::array<double, 4>> delays_ps;
    /// Zero selects 20 / (filter angular FWHM).
    double distinguishable_delay_ps = 0.0;

    int grid_points = 17;
    double grid_span_fwhm = 4.0;
    std::size_t max_transversal = 5040;

    double effective_distinguishable_delay() const {
        if (distinguishable_delay_ps > 0.0) {
            return distinguishable_delay_ps;
        }
        return 20.0 / angular_width(filter_fwhm_nm, center_nm);
    }

    FrequencyGrid grid() const {
        double max_offset = 0.5 * std::max(separation_ab_nm, separation_cd_nm);
        return filter_grid(filter_fwhm_nm, center_nm, max_offset, grid_points, grid_span_fwhm);
    }

    std::pair<SpectralAmplitude, SpectralAmplitude> jsas() const {
        FrequencyGrid g = grid();
        if (jsa_model == "separable") {
            SpectralAmplitude s = build_separable_jsa(g, 0.0, angular_width(filter_fwhm_nm, center_nm));
            return {s, s};
        }
        GaussianJsaParams ab{pump_fwhm_nm, filter_fwhm_nm, -0.5 * separation_ab_nm, 0.5 * separation_ab_nm, center_nm};
        GaussianJsaParams cd{pump_fwhm_nm, filter_fwhm_nm, -0.5 * separation_cd_nm, 0.5 * separation_cd_nm, center_nm};
        return {build_gaussian_jsa(ab, g), build_gaussian_jsa(cd, g)};
    }

    ComplexMatrix network() const {
        if (unitary_kind == "jx") {
            return jx_unitary(modes, time);
        }
        if (unitary_kind == "beamsplitters") {
            // Balanced beamsplitters on consecutive mode pairs (1,2), (3,4), ...
            if (modes % 2 != 0) {
                throw ConfigError("beamsplitters network needs an even mode count");
            }
            ComplexMatrix u = ComplexMatrix::Zero(modes, modes);
            ComplexMatrix bs = jx_unitary(2, time);
            for (int k = 0; k < modes; k += 2) {
                u.block(k, k, 2, 2) = bs;
            }
            return u;
        }
        if (unitary_kind == "merged") {
            std::ifstream in(amplitudes_path);
            if (!in) {
                throw ConfigError("cannot open amplitude file '" + amplitudes_path + "'");
            }
            RealMatrix amps = read_real_csv(in, amplitudes_path);
            if (amps.rows() != modes || amps.cols() != modes) {
                throw ConfigError("amplitude file is not " + std::to_string(modes) + "x" + std::to_string(modes));
            }
            return merge_amplitude_phase(amps, jx_unitary(modes, time));
        }
        throw ConfigError("unknown unitary kind '" + unitary_kind + "'");
    }

    ExperimentConfig build(int threads = 1) const {
        ExperimentConfig cfg;
        cfg.network = network();
        cfg.loss = eta.empty() ? LossConfig::lossless(modes) : LossConfig{eta};
        cfg.source.p_ab = p_ab;
        cfg.source.p_cd = p_cd;
        cfg.source.max_photons = max_photons;
        std::tie(cfg.source.jsa_ab, cfg.source.jsa_cd) = jsas();
        cfg.wiring = wiring;
        cfg.wiring.modes = modes;
        cfg.distinguishable_delay = effective_distinguishable_delay();
        cfg.delays = delays_ps ? *delays_ps : scenario_delays(scenario, cfg.distinguishable_delay);
        cfg.output_efficiency = output_efficiency;
        cfg.max_transversal = max_transversal;
        cfg.threads = threads;
        cfg.validate();
        return cfg;
    }

    /// Reads a plain numeric CSV; a first row that does not parse as numbers
    /// is treated as a header.
    static RealMatrix read_real_csv(std::istream &in, const std::string &name) {
        std::vector<std::vector<double>> rows;
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            std::vector<double> row;
            std::stringstream ss(line);
            std::string cell;
            bool numeric = true;
            while (std::getline(ss, cell, ',')) {
                try {
                    std::size_t used = 0;
                    row.push_back(std::stod(cell, &used));
                } catch (const std::exception &) {
                    numeric = false;
                    break;
                }
            }
            if (!numeric) {
                if (first) {
                    first = false;
                    continue;
                }
                throw ConfigError(name + ": non-numeric entry '" + cell + "'");
            }
            first = false;
            if (!rows.empty() && row.size() != rows.front().size()) {
                throw ConfigError(name + ": ragged rows");
            }
            rows.push_back(std::move(row));
        }
        if (rows.empty()) {
            throw ConfigError(name + ": no data");
        }
        RealMatrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < rows[i].size(); ++j) {
                m(i, j) = rows[i][j];
            }
        }
        return m;
    }

    static ExperimentFile from_document(const ConfigDocument &doc, const std::filesystem::path &base_dir = {}) {
        doc.check_keys({"unitary.kind", "unitary.modes", "unitary.time", "unitary.amplitudes", "source.p_ab",
                        "source.p_cd", "source.max_photons", "source.jsa", "source.pump_fwhm_nm",
                        "source.filter_fwhm_nm", "source.center_nm", "source.separation_ab_nm",
                        "source.separation_cd_nm", "wiring.a", "wiring.b", "wiring.c", "wiring.d", "loss.eta",
                        "loss.output_efficiency", "scenario.name", "scenario.delays_ps",
                        "scenario.distinguishable_delay_ps", "grid.points", "grid.span_fwhm",
                        "caps.max_transversal"});
        ExperimentFile f;
        f.unitary_kind = doc.string("unitary.kind", f.unitary_kind);
        f.modes = doc.integer("unitary.modes", f.modes);
        f.time = doc.number("unitary.time", f.time);
        if (doc.has("unitary.amplitudes")) {
            std::filesystem::path p = doc.string("unitary.amplitudes", "");
            if (p.is_relative() && !base_dir.empty()) {
                p = base_dir / p;
            }
            f.amplitudes_path = p.string();
            if (!std::filesystem::exists(p)) {
                throw ConfigError("amplitude file '" + f.amplitudes_path + "' does not exist");
            }
        } else if (f.unitary_kind == "merged") {
            throw ConfigError("unitary.kind = \"merged\" needs unitary.amplitudes");
        }
        f.p_ab = doc.number("source.p_ab", f.p_ab);
        f.p_cd = doc.number("source.p_cd", f.p_cd);
        f.max_photons = doc.integer("source.max_photons", f.max_photons);
        f.jsa_model = doc.string("source.jsa", f.jsa_model);
        if (f.jsa_model != "gaussian" && f.jsa_model != "separable") {
            throw ConfigError("source.jsa must be \"gaussian\" or \"separable\"");
        }
        f.pump_fwhm_nm = doc.number("source.pump_fwhm_nm", f.pump_fwhm_nm);
        f.filter_fwhm_nm = doc.number("source.filter_fwhm_nm", f.filter_fwhm_nm);
        f.center_nm = doc.number("source.center_nm", f.center_nm);
        f.separation_ab_nm = doc.number("source.separation_ab_nm", f.separation_ab_nm);
        f.separation_cd_nm = doc.number("source.separation_cd_nm", f.separation_cd_nm);
        f.wiring.mode = {doc.integer("wiring.a", 1), doc.integer("wiring.b", 7), doc.integer("wiring.c", 3),
                         doc.integer("wiring.d", 5)};
        f.wiring.modes = f.modes;
        f.eta = doc.list("loss.eta", {});
        f.output_efficiency = doc.list("loss.output_efficiency", {});
        f.scenario = parse_scenario(doc.string("scenario.name", scenario_name(f.scenario)));
        if (doc.has("scenario.delays_ps")) {
            auto d = doc.list("scenario.delays_ps", {});
            if (d.size() != 4) {
                throw ConfigError("scenario.delays_ps needs four entries (channels a..d)");
            }
            f.delays_ps = std::array<double, 4>{d[0], d[1], d[2], d[3]};
        }
        f.distinguishable_delay_ps = doc.number("scenario.distinguishable_delay_ps", 0.0);
        f.grid_points = doc.integer("grid.points", f.grid_points);
        f.grid_span_fwhm = doc.number("grid.span_fwhm", f.grid_span_fwhm);
        int cap = doc.integer("caps.max_transversal", static_cast<int>(f.max_transversal));
        if (cap < 1) {
            throw ConfigError("caps.max_transversal must be positive");
        }
        f.max_transversal = static_cast<std::size_t>(cap);
        if (f.modes < 2) {
            throw ConfigError("unitary.modes must be at least 2");
        }
        if (f.grid_points < 2) {
            throw ConfigError("grid.points must be at least 2");
        }
        if (!f.eta.empty() && static_cast<int>(f.eta.size()) != f.modes) {
            throw ConfigError("loss.eta needs one entry per mode");
        }
        if (!f.output_efficiency.empty() && static_cast<int>(f.output_efficiency.size()) != f.modes) {
            throw ConfigError("loss.output_efficiency needs one entry per mode");
        }
        return f;
    }

    static ExperimentFile load(const std::string &path) {
        return from_document(ConfigDocument::load(path), std::filesystem::path(path).parent_path());
    }
};

/// Bundled configurations:
///  - paper-reference: Jx on 7 modes with ideal amplitudes, measured input
///    transmissivities, calibrated Gaussian JSAs, up to six photons;
///  - ideal: lossless Jx, identical separable spectra, four photons;
///  - beamsplitter: two balanced beamsplitters, channels a,b on modes 1,2 and
///    c,d on modes 3,4, lossless.
inline ExperimentFile preset(const std::string &name) {
    ExperimentFile f;
    if (name == "paper-reference") {
        f.eta = {0.055, 1.0, 0.034, 1.0, 0.107, 1.0, 0.065};
        return f;
    }
    if (name == "ideal") {
        f.jsa_model = "separable";
        f.max_photons = 4;
        return f;
    }
    if (name == "beamsplitter") {
        f.unitary_kind = "beamsplitters";
        f.modes = 4;
        f.wiring.mode = {1, 2, 3, 4};
        f.wiring.modes = 4;
        f.max_photons = 4;
        return f;
    }
    throw ConfigError("unknown preset '" + name + "' (known: paper-reference, ideal, beamsplitter)");
}

}  // namespace suplaw
