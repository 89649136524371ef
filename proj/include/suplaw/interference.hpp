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

// Many-photon output statistics: coset-reduced transition probabilities,
// the Jx suppression law, detector-pattern aggregation over incoherently mixed
// SPDC input states, and the derived figures of merit.

#include "suplaw/source.hpp"
#include "suplaw/unitary.hpp"

#include <map>
#include <sstream>

namespace suplaw {

/// Sum over mu, nu of rho_{mu nu} A_mu conj(A_nu) with A_mu = prod_a U_{F_a, E_mu(a)},
/// times N!/prod_j S_j!. Modes of R and S index columns and rows of `u`.
inline double transition_probability(const ExternalDensityMatrix &rho, const ComplexMatrix &u,
                                     const ModeOccupation &r, const ModeOccupation &s) {
    const auto &t = rho.transversal;
    if (r.total() != s.total()) {
        throw std::invalid_argument("transition_probability: photon numbers differ");
    }
    if (!(t.occupation.counts == r.counts)) {
        // Allow R given over more modes than rho (trailing empty ancillas).
        std::vector<int> trimmed(r.counts.begin(),
                                 r.counts.begin() + std::min<std::size_t>(r.counts.size(), t.occupation.counts.size()));
        bool tail_empty = std::all_of(r.counts.begin() + trimmed.size(), r.counts.end(), [](int c) { return c == 0; });
        if (!tail_empty || trimmed != t.occupation.counts) {
            throw std::invalid_argument("transition_probability: R does not match the density matrix");
        }
    }
    if (r.modes() > u.cols() || s.modes() > u.rows()) {
        throw std::invalid_argument("transition_probability: occupation exceeds network size");
    }
    const auto f = assignment_from_occupation(s).modes;
    const int n_particles = s.total();
    const std::size_t dim = t.size();
    ComplexVector a(static_cast<Eigen::Index>(dim));
    for (std::size_t mu = 0; mu < dim; ++mu) {
        Complex prod(1.0);
        for (int al = 0; al < n_particles; ++al) {
            prod *= u(f[al] - 1, t.orderings[mu][al] - 1);
        }
        a(static_cast<Eigen::Index>(mu)) = prod;
    }
    Complex q = a.dot(rho.entries.transpose() * a);
    double sfac = static_cast<double>(factorial(n_particles)) / static_cast<double>(young_subgroup_order(s));
    double p = sfac * q.real();
    double imag = sfac * q.imag();
    if (std::abs(imag) > 1e-12 * std::max(1.0, std::abs(p))) {
        throw NumericalError("transition_probability: non-real probability (imaginary part " +
                             std::to_string(imag) + ")");
    }
    if (p < -1e-12) {
        throw NumericalError("transition_probability: negative probability " + std::to_string(p));
    }
    return std::max(0.0, p);
}

/// Odd photon count in even (1-based) output modes. Defined for odd n.
inline bool is_suppressed(const ModeOccupation &s) {
    if (s.modes() % 2 == 0) {
        throw std::invalid_argument("is_suppressed: needs an odd mode count");
    }
    int even = 0;
    for (int j = 2; j <= s.modes(); j += 2) {
        even += s[j];
    }
    return even % 2 == 1;
}

/// Sorted list of fired (1-based) real modes.
struct DetectorPattern {
    std::vector<int> fired;

    int size() const { return static_cast<int>(fired.size()); }
    bool operator<(const DetectorPattern &o) const { return fired < o.fired; }
    bool operator==(const DetectorPattern &o) const { return fired == o.fired; }

    ModeOccupation occupation(int n) const {
        std::vector<int> c(n, 0);
        for (int m : fired) {
            c.at(m - 1) = 1;
        }
        return ModeOccupation(std::move(c));
    }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < fired.size(); ++i) {
            os << (i ? "," : "") << fired[i];
        }
        return os.str();
    }
};

/// All size-k subsets of {1..n} in lexicographic order.
inline std::vector<DetectorPattern> collision_free_patterns(int n, int k) {
    std::vector<DetectorPattern> out;
    if (k < 0 || k > n) {
        return out;
    }
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 1);
    while (true) {
        out.push_back(DetectorPattern{idx});
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i + 1) {
            --i;
        }
        if (i < 0) {
            break;
        }
        ++idx[i];
        for (int j = i + 1; j < k; ++j) {
            idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

/// (suppressed, total) over collision-free patterns of N photons in n modes.
inline std::pair<int, int> count_suppressed_patterns(int n, int photons) {
    if (photons > n) {
        throw std::invalid_argument("count_suppressed_patterns: need N <= n");
    }
    int suppressed = 0;
    auto patterns = collision_free_patterns(n, photons);
    for (const auto &p : patterns) {
        suppressed += is_suppressed(p.occupation(n)) ? 1 : 0;
    }
    return {suppressed, static_cast<int>(patterns.size())};
}

/// Calls fn(counts) for every distribution of `photons` over `modes` modes,
/// in reverse-lexicographic order of the count vector.
template <typename Fn>
void for_each_occupation(int modes, int photons, Fn &&fn) {
    std::vector<int> c(modes, 0);
    auto rec = [&](auto &&self, int pos, int left) -> void {
        if (pos == modes - 1) {
            c[pos] = left;
            fn(c);
            return;
        }
        for (int k = left; k >= 0; --k) {
            c[pos] = k;
            self(self, pos + 1, left - k);
        }
    };
    if (modes == 0) {
        return;
    }
    rec(rec, 0, photons);
}

enum class Scenario { mutually_indistinguishable, inter_cycle, intra_cycle, mutually_distinguishable };

inline const char *scenario_name(Scenario s) {
    switch (s) {
        case Scenario::mutually_indistinguishable:
            return "mutually-indistinguishable";
        case Scenario::inter_cycle:
            return "inter-cycle";
        case Scenario::intra_cycle:
            return "intra-cycle";
        case Scenario::mutually_distinguishable:
            return "mutually-distinguishable";
    }
    return "?";
}

inline Scenario parse_scenario(const std::string &s) {
    for (Scenario sc : {Scenario::mutually_indistinguishable, Scenario::inter_cycle, Scenario::intra_cycle,
                        Scenario::mutually_distinguishable}) {
        if (s == scenario_name(sc)) {
            return sc;
        }
    }
    throw ConfigError("unknown scenario '" + s + "'");
}

/// Channel delays (ps) realizing a scenario: inter-cycle delays c,d together;
/// intra-cycle delays b and d against a and c; mutually distinguishable uses
/// three distinct large delays.
inline std::array<double, 4> scenario_delays(Scenario s, double large) {
    switch (s) {
        case Scenario::mutually_indistinguishable:
            return {0.0, 0.0, 0.0, 0.0};
        case Scenario::inter_cycle:
            return {0.0, 0.0, large, large};
        case Scenario::intra_cycle:
            return {0.0, large, 0.0, large};
        case Scenario::mutually_distinguishable:
            return {0.0, large, 2.0 * large, 3.0 * large};
    }
    return {};
}

struct ExperimentConfig {
    /// n x n network (ideal Jx or merged amplitudes).
    ComplexMatrix network;
    LossConfig loss;
    SourceParams source;
    ChannelWiring wiring;
    std::array<double, 4> delays{0.0, 0.0, 0.0, 0.0};
    /// Delay separation (ps) beyond which photons occupy orthogonal temporal
    /// modes. Smaller relative delays are applied as spectral phases.
    double distinguishable_delay = 1.0;
    /// Per-output transmissivity x detector efficiency.
    std::vector<double> output_efficiency;
    std::size_t max_transversal = 5040;
    int threads = 1;

    int modes() const { return static_cast<int>(network.rows()); }

    void validate() const {
        const int n = modes();
        if (n < 2 || network.cols() != n) {
            throw ConfigError("network must be a square matrix with n >= 2");
        }
        if (static_cast<int>(loss.eta.size()) != n) {
            throw ConfigError("loss vector length does not match the network");
        }
        for (double e : loss.eta) {
            if (!(e >= 0.0 && e <= 1.0)) {
                throw ConfigError("input transmissivity outside [0,1]");
            }
        }
        if (!output_efficiency.empty() && static_cast<int>(output_efficiency.size()) != n) {
            throw ConfigError("output efficiency vector length does not match the network");
        }
        for (double e : output_efficiency) {
            if (!(e >= 0.0 && e <= 1.0)) {
                throw ConfigError("output efficiency outside [0,1]");
            }
        }
        if (wiring.modes != n) {
            throw ConfigError("wiring mode count does not match the network");
        }
        wiring.validate();
        if (!(source.jsa_ab.grid == source.jsa_cd.grid)) {
            throw ConfigError("both sources must share one frequency grid");
        }
        if (!(distinguishable_delay > 0.0)) {
            throw ConfigError("distinguishable_delay must be positive");
        }
        (void)SourceModel(source);
    }
};

/// Temporal-mode label and residual spectral delay per channel. Channels are
/// clustered by sorted delay; a gap of at least `threshold` (up to a relative
/// 1e-9, so integer multiples of the threshold separate) starts a new temporal
/// mode.
struct ChannelTiming {
    std::array<int, 4> slot{};
    std::array<double, 4> residual{};
};

inline ChannelTiming channel_timing(const std::array<double, 4> &delays, double threshold) {
    std::array<int, 4> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return delays[x] < delays[y]; });
    ChannelTiming t;
    int slot = 0;
    double prev = delays[order[0]];
    double base = prev;
    for (int i = 0; i < 4; ++i) {
        int ch = order[i];
        if (i > 0 && delays[ch] - prev >= threshold * (1.0 - 1e-9)) {
            ++slot;
            base = delays[ch];
        }
        t.slot[ch] = slot;
        t.residual[ch] = delays[ch] - base;
        prev = delays[ch];
    }
    return t;
}

/// Internal state of P pairs in (a,b) and Q pairs in (c,d) under the
/// configured wiring and delays.
inline PairProductState build_pair_state(const ExperimentConfig &cfg, int pairs_ab, int pairs_cd,
                                         const std::array<double, 4> &delays) {
    ChannelTiming timing = channel_timing(delays, cfg.distinguishable_delay);
    auto delayed = [&](const SpectralAmplitude &jsa, int ch_first, int ch_second) {
        SpectralAmplitude out = jsa;
        if (timing.residual[ch_first] != 0.0) {
            out = apply_delay(out, Axis::first, timing.residual[ch_first]);
        }
        if (timing.residual[ch_second] != 0.0) {
            out = apply_delay(out, Axis::second, timing.residual[ch_second]);
        }
        return out;
    };
    PairProductState st;
    st.modes = cfg.modes();
    SpectralAmplitude ab = delayed(cfg.source.jsa_ab, 0, 1);
    SpectralAmplitude cd = delayed(cfg.source.jsa_cd, 2, 3);
    for (int i = 0; i < pairs_ab; ++i) {
        st.pairs.push_back(PhotonPair{ab, cfg.wiring.mode[0], cfg.wiring.mode[1], timing.slot[0], timing.slot[1]});
    }
    for (int i = 0; i < pairs_cd; ++i) {
        st.pairs.push_back(PhotonPair{cd, cfg.wiring.mode[2], cfg.wiring.mode[3], timing.slot[2], timing.slot[3]});
    }
    return st;
}

/// Pattern probabilities with a per-input-state breakdown. After
/// simulate_experiment the totals are normalized over the reported patterns.
struct OutputDistribution {
    int modes = 0;
    int fold = 0;
    std::vector<std::string> labels;
    std::map<DetectorPattern, std::vector<double>> contributions;
    /// Sum of weighted pattern probabilities before normalization.
    double raw_total = 0.0;
    /// max |sum_S p(R->S) - 1| over the simulated input states.
    double max_norm_defect = 0.0;

    double total(const DetectorPattern &p) const {
        auto it = contributions.find(p);
        if (it == contributions.end()) {
            return 0.0;
        }
        double s = 0.0;
        for (double v : it->second) {
            s += v;
        }
        return s;
    }

    double grand_total() const {
        double s = 0.0;
        for (const auto &[p, v] : contributions) {
            for (double x : v) {
                s += x;
            }
        }
        return s;
    }

    /// Share of the reported probability carried by contribution `label`.
    double fraction(const std::string &label) const {
        auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end()) {
            return 0.0;
        }
        std::size_t k = static_cast<std::size_t>(it - labels.begin());
        double part = 0.0;
        for (const auto &[p, v] : contributions) {
            part += v[k];
        }
        double tot = grand_total();
        return tot > 0.0 ? part / tot : 0.0;
    }

    void normalize() {
        double tot = grand_total();
        if (!(tot > 0.0)) {
            throw NumericalError("OutputDistribution: no probability on the reported patterns");
        }
        for (auto &[p, v] : contributions) {
            for (double &x : v) {
                x /= tot;
            }
        }
    }
};

namespace detail {

inline std::string input_label(const ModeOccupation &r) {
    static const std::map<std::vector<int>, std::string> known{
        {{2, 0, 0, 0, 0, 0, 2}, "R1"}, {{1, 0, 1, 0, 1, 0, 1}, "R2"}, {{0, 0, 2, 0, 2, 0, 0}, "R3"},
        {{0, 0, 1, 0, 1, 0, 0}, "R4"}, {{1, 0, 0, 0, 0, 0, 1}, "R5"}};
    auto it = known.find(r.counts);
    return it != known.end() ? it->second : "R" + r.str();
}

/// Output probabilities of every occupation of the loss-extended network,
/// restricted to modes that can receive amplitude.
struct StateOutputs {
    std::vector<std::vector<int>> occupations;  // over `active_modes`
    std::vector<double> probs;
    std::vector<int> active_modes;              // 1-based modes of the extended network
};

inline StateOutputs all_outputs(const ExternalDensityMatrix &rho, const ComplexMatrix &extended, int n,
                                const LossConfig &loss, int threads) {
    StateOutputs out;
    const auto &r = rho.transversal.occupation;
    for (int k = 1; k <= n; ++k) {
        out.active_modes.push_back(k);
    }
    for (int j = 1; j <= n; ++j) {
        if (r[j] > 0 && loss.eta[j - 1] < 1.0) {
            out.active_modes.push_back(n + j);
        }
    }
    const int m = static_cast<int>(out.active_modes.size());
    const int photons = r.total();
    for_each_occupation(m, photons, [&](const std::vector<int> &c) { out.occupations.push_back(c); });
    out.probs.assign(out.occupations.size(), 0.0);

    // Reduced network: active output rows, real input columns.
    ComplexMatrix sub(m, n);
    for (int i = 0; i < m; ++i) {
        sub.row(i) = extended.row(out.active_modes[i] - 1).head(n);
    }
    const auto &t = rho.transversal;
    const std::size_t dim = t.size();
    const ComplexMatrix rho_t = rho.entries.transpose();
    const double nfact = static_cast<double>(factorial(photons));
    parallel_for(out.occupations.size(), threads, [&](std::size_t idx) {
        const auto &c = out.occupations[idx];
        std::vector<int> f;
        double sfact = 1.0;
        for (int i = 0; i < m; ++i) {
            for (int k = 0; k < c[i]; ++k) {
                f.push_back(i);
            }
            sfact *= static_cast<double>(factorial(c[i]));
        }
        ComplexVector a(static_cast<Eigen::Index>(dim));
        for (std::size_t mu = 0; mu < dim; ++mu) {
            Complex prod(1.0);
            const auto &o = t.orderings[mu];
            for (int al = 0; al < photons; ++al) {
                prod *= sub(f[al], o[al] - 1);
            }
            a(static_cast<Eigen::Index>(mu)) = prod;
        }
        Complex q = a.dot(rho_t * a);
        double p = nfact / sfact * q.real();
        if (std::abs(nfact / sfact * q.imag()) > 1e-12 * std::max(1.0, std::abs(p))) {
            throw NumericalError("non-real output probability");
        }
        if (p < -1e-12) {
            throw NumericalError("negative output probability " + std::to_string(p));
        }
        out.probs[idx] = std::max(0.0, p);
    });
    return out;
}

}  // namespace detail

/// Incoherent mixture over all source states with min_photons <= N <=
/// max_photons, mapped onto `fold`-fold detector patterns of non-number-
/// resolving detectors; each pattern weighted by the product of the fired
/// modes' output efficiencies, then normalized over the reported patterns.
inline OutputDistribution simulate_patterns(const ExperimentConfig &cfg, int fold, int min_photons,
                                            std::vector<InputStateRecord> *records_out = nullptr) {
    cfg.validate();
    const int n = cfg.modes();
    SourceModel model(cfg.source);
    ChannelWiring wiring = cfg.wiring;
    auto records = enumerate_input_states(model, wiring, min_photons);
    ComplexMatrix extended = extend_with_loss(cfg.network, cfg.loss);
    std::vector<double> eff = cfg.output_efficiency.empty() ? std::vector<double>(n, 1.0) : cfg.output_efficiency;

    OutputDistribution dist;
    dist.modes = n;
    dist.fold = fold;
    std::vector<int> label_of(records.size());
    bool has_background = false;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].photons == fold) {
            label_of[i] = static_cast<int>(dist.labels.size());
            dist.labels.push_back(detail::input_label(records[i].occupation));
        } else {
            has_background = true;
        }
    }
    if (has_background) {
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (records[i].photons != fold) {
                label_of[i] = static_cast<int>(dist.labels.size());
            }
        }
        dist.labels.push_back("background");
    }
    for (const auto &p : collision_free_patterns(n, fold)) {
        dist.contributions[p].assign(dist.labels.size(), 0.0);
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto &rec = records[i];
        PairProductState st = build_pair_state(cfg, rec.pairs_ab, rec.pairs_cd, cfg.delays);
        ExternalDensityMatrix rho = external_density_matrix(st, cfg.max_transversal, cfg.threads);
        auto outs = detail::all_outputs(rho, extended, n, cfg.loss, cfg.threads);
        double norm = 0.0;
        for (std::size_t k = 0; k < outs.probs.size(); ++k) {
            norm += outs.probs[k];
            std::vector<int> fired;
            for (int m = 0; m < n; ++m) {
                if (outs.occupations[k][m] > 0) {
                    fired.push_back(m + 1);
                }
            }
            if (static_cast<int>(fired.size()) != fold) {
                continue;
            }
            double w = 1.0;
            for (int m : fired) {
                w *= eff[m - 1];
            }
            dist.contributions[DetectorPattern{fired}][label_of[i]] += rec.p_gen * outs.probs[k] * w;
        }
        dist.max_norm_defect = std::max(dist.max_norm_defect, std::abs(norm - 1.0));
        if (std::abs(norm - 1.0) > 1e-9) {
            throw NumericalError("output probabilities of input " + rec.occupation.str() + " sum to " +
                                 std::to_string(norm));
        }
    }
    dist.raw_total = dist.grand_total();
    dist.normalize();
    if (records_out != nullptr) {
        *records_out = std::move(records);
    }
    return dist;
}

/// Fourfold coincidence statistics from four- and six-photon source states.
inline OutputDistribution simulate_experiment(const ExperimentConfig &cfg) {
    return simulate_patterns(cfg, 4, 4);
}

/// Twofold coincidence statistics from single pairs plus the lossy four- and
/// six-photon background.
inline OutputDistribution twofold_distribution(const ExperimentConfig &cfg) {
    return simulate_patterns(cfg, 2, 2);
}

/// Fraction of the distribution on ideally suppressed patterns.
inline double degree_of_violation(const OutputDistribution &dist) {
    double forbidden = 0.0;
    double total = 0.0;
    for (const auto &[p, v] : dist.contributions) {
        double s = 0.0;
        for (double x : v) {
            s += x;
        }
        total += s;
        if (is_suppressed(p.occupation(dist.modes))) {
            forbidden += s;
        }
    }
    if (!(total > 0.0)) {
        throw std::invalid_argument("degree_of_violation: empty distribution");
    }
    return forbidden / total;
}

/// N_forbidden / N_total from recorded event counts per pattern.
inline double degree_of_violation(const std::map<DetectorPattern, double> &counts, int modes) {
    double forbidden = 0.0;
    double total = 0.0;
    for (const auto &[p, c] : counts) {
        total += c;
        if (is_suppressed(p.occupation(modes))) {
            forbidden += c;
        }
    }
    if (!(total > 0.0)) {
        throw std::invalid_argument("degree_of_violation: no events");
    }
    return forbidden / total;
}

/// (sum_i sqrt(p_i q_i))^2 over the union of pattern supports.
inline double distribution_fidelity(const OutputDistribution &p, const OutputDistribution &q) {
    double s = 0.0;
    for (const auto &[pat, v] : p.contributions) {
        s += std::sqrt(std::max(0.0, p.total(pat)) * std::max(0.0, q.total(pat)));
    }
    return s * s;
}

struct HomScan {
    std::vector<std::pair<double, double>> points;
    /// Pattern probability for fully distinguishable photons (large delay).
    double distinguishable = 0.0;
};

/// Probability of `watch` for one pair from the source containing `channel`,
/// as that channel's delay is scanned relative to its partner.
inline HomScan hom_scan(const ExperimentConfig &cfg, Channel channel, const std::vector<double> &taus,
                        const DetectorPattern &watch) {
    cfg.validate();
    const int n = cfg.modes();
    const int ch = static_cast<int>(channel);
    const bool ab = ch < 2;
    ComplexMatrix extended = extend_with_loss(cfg.network, cfg.loss);
    std::vector<double> eff = cfg.output_efficiency.empty() ? std::vector<double>(n, 1.0) : cfg.output_efficiency;
    double weight = 1.0;
    for (int m : watch.fired) {
        if (m < 1 || m > n) {
            throw std::invalid_argument("hom_scan: watched mode outside the network");
        }
        weight *= eff[m - 1];
    }
    auto pattern_probability = [&](const ExperimentConfig &c, const std::array<double, 4> &delays) {
        PairProductState st = build_pair_state(c, ab ? 1 : 0, ab ? 0 : 1, delays);
        ExternalDensityMatrix rho = external_density_matrix(st, c.max_transversal, 1);
        auto outs = detail::all_outputs(rho, extended, n, c.loss, 1);
        double p = 0.0;
        for (std::size_t k = 0; k < outs.probs.size(); ++k) {
            std::vector<int> fired;
            for (int m = 0; m < n; ++m) {
                if (outs.occupations[k][m] > 0) {
                    fired.push_back(m + 1);
                }
            }
            if (fired == watch.fired) {
                p += outs.probs[k];
            }
        }
        return p * weight;
    };
    // The scan itself stays within one temporal mode; the delay acts as a spectral phase.
    ExperimentConfig coherent = cfg;
    coherent.distinguishable_delay = std::numeric_limits<double>::infinity();
    HomScan scan;
    for (double tau : taus) {
        std::array<double, 4> delays{0.0, 0.0, 0.0, 0.0};
        delays[ch] = tau;
        scan.points.emplace_back(tau, pattern_probability(coherent, delays));
    }
    std::array<double, 4> far{0.0, 0.0, 0.0, 0.0};
    far[ch] = 2.0 * cfg.distinguishable_delay;
    scan.distinguishable = pattern_probability(cfg, far);
    return scan;
}

}  // namespace suplaw
