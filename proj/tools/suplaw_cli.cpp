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


// suplaw: command-line front end.
//
// Exit codes: 0 success, 1 numerical or internal failure, 2 invalid
// configuration or arguments, 3 resource cap exceeded.

#include "suplaw/suplaw.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

using suplaw::io::Json;

struct Common {
    std::string format = "json";
    std::string config;
    std::string preset_name = "paper-reference";
    std::string scenario;
    std::string out;
    int threads = suplaw::default_thread_count();
    bool seedless = false;
};

void add_common(CLI::App *cmd, Common &c, bool experiment) {
    cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", c.out, "Output file (default: stdout)");
    cmd->add_option("--threads", c.threads, "Worker threads (default: SUPLAW_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--seedless", c.seedless, "Deterministic operation (always on; accepted for scripts)");
    if (experiment) {
        cmd->add_option("--config", c.config, "Experiment file (TOML-style)");
        cmd->add_option("--preset", c.preset_name, "Bundled preset: paper-reference, ideal, beamsplitter");
        cmd->add_option("--scenario", c.scenario,
                        "mutually-indistinguishable | inter-cycle | intra-cycle | mutually-distinguishable");
    }
}

suplaw::ExperimentFile load_file(const Common &c) {
    suplaw::ExperimentFile f = c.config.empty() ? suplaw::preset(c.preset_name) : suplaw::ExperimentFile::load(c.config);
    if (!c.scenario.empty()) {
        f.scenario = suplaw::parse_scenario(c.scenario);
        f.delays_ps.reset();
    }
    return f;
}

void emit(const Common &c, const std::function<void(std::ostream &)> &json, const std::function<void(std::ostream &)> &csv) {
    std::ofstream file;
    std::ostream *os = &std::cout;
    if (!c.out.empty()) {
        file.open(c.out, std::ios::binary);
        if (!file) {
            throw suplaw::ConfigError("cannot write '" + c.out + "'");
        }
        os = &file;
    }
    if (c.format == "csv") {
        csv(*os);
    } else {
        json(*os);
    }
}

void dump(std::ostream &os, const Json &j) { os << j.dump(2) << "\n"; }

std::vector<int> parse_pattern(const std::string &s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception &) {
            throw suplaw::ConfigError("malformed pattern '" + s + "'");
        }
    }
    std::sort(out.begin(), out.end());
    if (out.empty() || std::adjacent_find(out.begin(), out.end()) != out.end()) {
        throw suplaw::ConfigError("pattern must list distinct modes, e.g. 1,4");
    }
    return out;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Many-photon interference and suppression-law simulator"};
    app.require_subcommand(1);

    Common c;

    int table_modes = 7;
    int table_photons = 4;
    auto *table = app.add_subcommand("suppression-table", "List collision-free patterns and the suppression flag");
    table->add_option("--modes,-n", table_modes, "Mode count (odd)")->check(CLI::PositiveNumber);
    table->add_option("--photons,-N", table_photons, "Photon number")->check(CLI::NonNegativeNumber);
    add_common(table, c, false);

    auto *simulate = app.add_subcommand("simulate", "Fourfold output distribution with contribution breakdown");
    add_common(simulate, c, true);

    auto *twofold = app.add_subcommand("twofold", "Twofold output distribution");
    add_common(twofold, c, true);

    std::string scan_channel = "c";
    double tau_min = -1.0, tau_max = 1.0;
    int tau_steps = 41;
    std::string watch = "1,4";
    int scan_grid = 0;
    auto *scan = app.add_subcommand("hom-scan", "Two-photon coincidence probability versus channel delay");
    scan->add_option("--channel", scan_channel, "Delayed channel")->check(CLI::IsMember({"a", "b", "c", "d"}));
    scan->add_option("--tau-min", tau_min, "First delay (ps)");
    scan->add_option("--tau-max", tau_max, "Last delay (ps)");
    scan->add_option("--steps", tau_steps, "Number of delays")->check(CLI::PositiveNumber);
    scan->add_option("--watch", watch, "Watched pattern, comma-separated modes");
    scan->add_option("--grid-points", scan_grid, "Override the frequency grid size for the scan");
    add_common(scan, c, true);

    auto *table2 = app.add_subcommand("table2", "Generation probabilities of all contributing input states");
    add_common(table2, c, true);

    int random_cases = 100;
    auto *validate = app.add_subcommand("validate", "Compare the fast engine with the brute-force oracle");
    validate->add_option("--random-cases", random_cases, "Randomized network/spectrum cases")
        ->check(CLI::NonNegativeNumber);
    add_common(validate, c, true);

    auto *jsa = app.add_subcommand("jsa", "Joint spectral amplitude tools");
    auto *jsa_export = jsa->add_subcommand("export", "Export a calibrated JSA");
    jsa->require_subcommand(1);
    std::string jsa_source = "ab";
    jsa_export->add_option("--source", jsa_source, "Pair source")->check(CLI::IsMember({"ab", "cd"}));
    add_common(jsa_export, c, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (table->parsed()) {
            auto patterns = suplaw::collision_free_patterns(table_modes, table_photons);
            if (table_photons > table_modes) {
                throw suplaw::ConfigError("photon number exceeds mode count");
            }
            if (table_modes % 2 == 0) {
                throw suplaw::ConfigError("suppression law needs an odd mode count");
            }
            auto [sup, total] = suplaw::count_suppressed_patterns(table_modes, table_photons);
            emit(
                c,
                [&](std::ostream &os) {
                    Json rows = Json::array();
                    for (const auto &p : patterns) {
                        rows.push_back(Json{{"pattern", p.fired},
                                            {"suppressed", suplaw::is_suppressed(p.occupation(table_modes))}});
                    }
                    dump(os, Json{{"modes", table_modes},
                                  {"photons", table_photons},
                                  {"suppressed", sup},
                                  {"total", total},
                                  {"patterns", rows}});
                },
                [&](std::ostream &os) {
                    os << "pattern,suppressed\n";
                    for (const auto &p : patterns) {
                        os << '"' << p.str() << "\"," << (suplaw::is_suppressed(p.occupation(table_modes)) ? 1 : 0)
                           << "\n";
                    }
                });
        } else if (simulate->parsed() || twofold->parsed()) {
            auto cfg = load_file(c).build(c.threads);
            auto dist = simulate->parsed() ? suplaw::simulate_experiment(cfg) : suplaw::twofold_distribution(cfg);
            emit(
                c, [&](std::ostream &os) { dump(os, suplaw::io::distribution_to_json(dist)); },
                [&](std::ostream &os) { suplaw::io::write_distribution_csv(os, dist); });
        } else if (scan->parsed()) {
            auto file = load_file(c);
            if (scan_grid > 0) {
                file.grid_points = scan_grid;
            }
            auto cfg = file.build(c.threads);
            std::vector<double> taus;
            for (int k = 0; k < tau_steps; ++k) {
                taus.push_back(tau_steps == 1 ? tau_min : tau_min + (tau_max - tau_min) * k / (tau_steps - 1));
            }
            auto ch = static_cast<suplaw::Channel>(scan_channel[0] - 'a');
            auto result = suplaw::hom_scan(cfg, ch, taus, suplaw::DetectorPattern{parse_pattern(watch)});
            emit(
                c, [&](std::ostream &os) { dump(os, suplaw::io::scan_to_json(result)); },
                [&](std::ostream &os) { suplaw::io::write_scan_csv(os, result); });
        } else if (table2->parsed()) {
            auto cfg = load_file(c).build(c.threads);
            auto recs = suplaw::enumerate_input_states(cfg.source, cfg.wiring, 4);
            emit(
                c, [&](std::ostream &os) { dump(os, suplaw::io::records_to_json(recs)); },
                [&](std::ostream &os) { suplaw::io::write_records_csv(os, recs); });
        } else if (validate->parsed()) {
            auto cfg = load_file(c).build(c.threads);
            suplaw::oracle::ValidationOptions opt;
            opt.random_cases = random_cases;
            opt.threads = c.threads;
            auto rep = suplaw::oracle::run_validation(cfg, opt);
            emit(
                c, [&](std::ostream &os) { dump(os, suplaw::io::oracle_report_to_json(rep)); },
                [&](std::ostream &os) {
                    os << "maxAbsDiff,worstCase,casesChecked,maxOverlapDiff,overlapsChecked\n"
                       << suplaw::io::fmt(rep.max_abs_diff) << ",\"" << rep.worst_case << "\"," << rep.cases_checked
                       << "," << suplaw::io::fmt(rep.max_overlap_diff) << "," << rep.overlaps_checked << "\n";
                });
        } else if (jsa_export->parsed()) {
            auto cfg = load_file(c).build(c.threads);
            const auto &s = jsa_source == "ab" ? cfg.source.jsa_ab : cfg.source.jsa_cd;
            emit(
                c, [&](std::ostream &os) { dump(os, suplaw::io::jsa_to_json(s)); },
                [&](std::ostream &os) { suplaw::io::write_jsa_csv(os, s); });
        }
    } catch (const suplaw::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const suplaw::ResourceError &e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument &e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
