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

// Brute-force reference implementations: transition probabilities from the
// double sum over all of S_N with exchange integrals summed on the dense
// N-dimensional frequency grid, and the distinguishable-particle permanent.
// Only the state and matrix containers are shared with the fast engine.

#include "suplaw/interference.hpp"

#include <map>
#include <random>

namespace suplaw::oracle {

inline constexpr double kMaxDenseGridPoints = 1e7;

namespace detail {

using Perm = std::vector<int>;  // 0-based images

struct Particles {
    std::vector<int> mode;                 // 1-based mode per particle label
    std::vector<int> slot;                 // temporal mode per particle label
    std::vector<std::array<int, 2>> vars;  // particle labels of each pair's two photons
    std::vector<ComplexMatrix> mats;       // Phi_p * weight
    int d = 0;
};

inline void add_pair_matrices(const PairProductState &state, Particles &ps) {
    for (const auto &pr : state.pairs) {
        if (ps.d != 0 && pr.jsa.size() != ps.d) {
            throw std::invalid_argument("oracle: pairs on different grids");
        }
        ps.d = pr.jsa.size();
        ps.mats.push_back(pr.jsa.amps * pr.jsa.grid.weight());
    }
}

/// Particle 2p is the first photon of pair p, 2p+1 the second.
inline Particles pair_order_particles(const PairProductState &state) {
    Particles ps;
    for (std::size_t p = 0; p < state.pairs.size(); ++p) {
        const auto &pr = state.pairs[p];
        ps.mode.push_back(pr.mode_a);
        ps.mode.push_back(pr.mode_b);
        ps.slot.push_back(pr.slot_a);
        ps.slot.push_back(pr.slot_b);
        ps.vars.push_back({static_cast<int>(2 * p), static_cast<int>(2 * p + 1)});
    }
    add_pair_matrices(state, ps);
    return ps;
}

/// Labels follow the sorted mode list; each pair takes the lowest unused label
/// in each of its modes.
inline Particles sorted_particles(const PairProductState &state) {
    Particles ps;
    for (const auto &pr : state.pairs) {
        ps.mode.push_back(pr.mode_a);
        ps.mode.push_back(pr.mode_b);
    }
    std::sort(ps.mode.begin(), ps.mode.end());
    const int n_particles = static_cast<int>(ps.mode.size());
    ps.slot.assign(n_particles, 0);
    std::vector<char> used(n_particles, 0);
    auto take = [&](int m) {
        for (int i = 0; i < n_particles; ++i) {
            if (!used[i] && ps.mode[i] == m) {
                used[i] = 1;
                return i;
            }
        }
        throw std::logic_error("oracle: inconsistent modes");
    };
    for (const auto &pr : state.pairs) {
        int a = take(pr.mode_a);
        int b = take(pr.mode_b);
        ps.slot[a] = pr.slot_a;
        ps.slot[b] = pr.slot_b;
        ps.vars.push_back({a, b});
    }
    add_pair_matrices(state, ps);
    return ps;
}

inline std::vector<Perm> symmetric_group(int n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<Perm> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

/// (a b)(i) = a(b(i)).
inline Perm compose(const Perm &a, const Perm &b) {
    Perm c(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        c[i] = a[b[i]];
    }
    return c;
}

inline Perm invert(const Perm &a) {
    Perm c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        c[a[i]] = static_cast<int>(i);
    }
    return c;
}

/// I(pi) = sum over the d^N grid of conj(Phi(w_pi)) Phi(w), (w_pi)_a = w_pi(a),
/// for every pi in S_N; zero whenever pi mixes temporal modes.
class DenseExchange {
   public:
    explicit DenseExchange(const Particles &ps) : perms_(symmetric_group(static_cast<int>(ps.mode.size()))) {
        const int n_particles = static_cast<int>(ps.mode.size());
        if (std::pow(static_cast<double>(ps.d), n_particles) > kMaxDenseGridPoints) {
            throw ResourceError("dense grid of " + std::to_string(ps.d) + "^" + std::to_string(n_particles) +
                                " points exceeds the oracle cap");
        }
        for (std::size_t i = 0; i < perms_.size(); ++i) {
            index_[perms_[i]] = i;
        }
        values_.assign(perms_.size(), Complex(0.0));
        std::vector<char> allowed(perms_.size(), 1);
        for (std::size_t i = 0; i < perms_.size(); ++i) {
            for (int a = 0; a < n_particles; ++a) {
                if (ps.slot[perms_[i][a]] != ps.slot[a]) {
                    allowed[i] = 0;
                }
            }
        }
        std::vector<int> w(n_particles, 0);
        std::vector<int> wp(n_particles);
        while (true) {
            Complex base(1.0);
            for (std::size_t p = 0; p < ps.vars.size(); ++p) {
                base *= ps.mats[p](w[ps.vars[p][0]], w[ps.vars[p][1]]);
            }
            if (base != Complex(0.0)) {
                for (std::size_t i = 0; i < perms_.size(); ++i) {
                    if (!allowed[i]) {
                        continue;
                    }
                    for (int a = 0; a < n_particles; ++a) {
                        wp[a] = w[perms_[i][a]];
                    }
                    Complex shifted(1.0);
                    for (std::size_t p = 0; p < ps.vars.size(); ++p) {
                        shifted *= ps.mats[p](wp[ps.vars[p][0]], wp[ps.vars[p][1]]);
                    }
                    values_[i] += std::conj(shifted) * base;
                }
            }
            int k = 0;
            while (k < n_particles && ++w[k] == ps.d) {
                w[k++] = 0;
            }
            if (k == n_particles) {
                break;
            }
        }
    }

    const std::vector<Perm> &perms() const { return perms_; }
    Complex operator()(const Perm &p) const { return values_[index_.at(p)]; }

   private:
    std::vector<Perm> perms_;
    std::map<Perm, std::size_t> index_;
    std::vector<Complex> values_;
};

inline std::vector<int> sorted_modes(const ModeOccupation &s) {
    std::vector<int> f;
    for (int j = 1; j <= s.modes(); ++j) {
        for (int k = 0; k < s[j]; ++k) {
            f.push_back(j);
        }
    }
    return f;
}

inline std::vector<Perm> stabilizer(const std::vector<Perm> &group, const std::vector<int> &modes) {
    std::vector<Perm> out;
    for (const auto &p : group) {
        bool keep = true;
        for (std::size_t a = 0; a < modes.size(); ++a) {
            keep = keep && modes[p[a]] == modes[a];
        }
        if (keep) {
            out.push_back(p);
        }
    }
    return out;
}

inline double full_probability(const Particles &ps, const DenseExchange &ex, const ComplexMatrix &u,
                               const ModeOccupation &s) {
    const auto f = sorted_modes(s);
    const int n_particles = static_cast<int>(ps.mode.size());
    if (static_cast<int>(f.size()) != n_particles) {
        throw std::invalid_argument("oracle: photon numbers differ");
    }
    const auto &group = ex.perms();
    std::vector<Complex> amp(group.size());
    for (std::size_t i = 0; i < group.size(); ++i) {
        Complex a(1.0);
        for (int al = 0; al < n_particles; ++al) {
            a *= u(f[al] - 1, ps.mode[group[i][al]] - 1);
        }
        amp[i] = a;
    }
    Complex num(0.0);
    for (std::size_t i = 0; i < group.size(); ++i) {
        for (std::size_t j = 0; j < group.size(); ++j) {
            num += amp[i] * std::conj(amp[j]) * ex(compose(group[i], invert(group[j])));
        }
    }
    Complex norm(0.0);
    for (const auto &sigma : stabilizer(group, ps.mode)) {
        norm += ex(sigma);
    }
    double sfact = 1.0;
    for (int c : s.counts) {
        for (int k = 2; k <= c; ++k) {
            sfact *= k;
        }
    }
    return num.real() / (sfact * norm.real());
}

}  // namespace detail

/// p(R -> S) from the unreduced symmetrization over all of S_N.
inline double transition_probability_full(const PairProductState &state, const ComplexMatrix &u,
                                          const ModeOccupation &r, const ModeOccupation &s) {
    if (!(state.occupation() == r)) {
        throw std::invalid_argument("transition_probability_full: R does not match the state");
    }
    if (state.photons() > 6) {
        throw ResourceError("transition_probability_full: N > 6");
    }
    if (r.modes() > u.cols() || s.modes() > u.rows()) {
        throw std::invalid_argument("transition_probability_full: occupation exceeds network size");
    }
    auto ps = detail::pair_order_particles(state);
    detail::DenseExchange ex(ps);
    return detail::full_probability(ps, ex, u, s);
}

/// <Omega_nu|Omega_mu> by direct summation over the dense grid. mu and nu act
/// on the sorted assignment list of R.
inline Complex dense_overlap(const PairProductState &state, const ModeOccupation &r, const Permutation &mu,
                             const Permutation &nu) {
    if (!(state.occupation() == r)) {
        throw std::invalid_argument("dense_overlap: R does not match the state");
    }
    auto ps = detail::sorted_particles(state);
    detail::DenseExchange ex(ps);
    auto young = detail::stabilizer(ex.perms(), ps.mode);
    auto coset_sum = [&](const detail::Perm &sigma) {
        Complex acc(0.0);
        for (const auto &x : young) {
            detail::Perm left = detail::compose(detail::invert(x), sigma);
            for (const auto &x2 : young) {
                acc += ex(detail::compose(left, x2));
            }
        }
        return acc;
    };
    detail::Perm m = mu.image();
    detail::Perm v = nu.image();
    detail::Perm id(m.size());
    std::iota(id.begin(), id.end(), 0);
    return coset_sum(detail::compose(m, detail::invert(v))) / coset_sum(id).real();
}

/// Ryser permanent of a real square matrix.
inline double ryser_permanent(const RealMatrix &m) {
    const int n = static_cast<int>(m.rows());
    if (m.cols() != n) {
        throw std::invalid_argument("ryser_permanent: matrix not square");
    }
    if (n == 0) {
        return 1.0;
    }
    double total = 0.0;
    for (std::uint32_t subset = 1; subset < (1u << n); ++subset) {
        double prod = 1.0;
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) {
                if (subset & (1u << j)) {
                    row += m(i, j);
                }
            }
            prod *= row;
        }
        int bits = __builtin_popcount(subset);
        total += ((n - bits) % 2 == 0 ? 1.0 : -1.0) * prod;
    }
    return total;
}

/// Distinguishable-particle probability perm(|U|^2_{F,E}) / prod_j S_j!.
inline double classical_permanent(const RealMatrix &usq, const ModeOccupation &r, const ModeOccupation &s) {
    if (r.total() != s.total()) {
        throw std::invalid_argument("classical_permanent: photon numbers differ");
    }
    if (r.total() > 8) {
        throw ResourceError("classical_permanent: N > 8");
    }
    auto e = detail::sorted_modes(r);
    auto f = detail::sorted_modes(s);
    const int n = static_cast<int>(e.size());
    RealMatrix sub(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            sub(i, j) = usq(f[i] - 1, e[j] - 1);
        }
    }
    double sfact = 1.0;
    for (int c : s.counts) {
        for (int k = 2; k <= c; ++k) {
            sfact *= k;
        }
    }
    return ryser_permanent(sub) / sfact;
}

struct OracleReport {
    double max_abs_diff = 0.0;
    std::string worst_case;
    int cases_checked = 0;
    double max_overlap_diff = 0.0;
    int overlaps_checked = 0;
};

struct ValidationOptions {
    int random_cases = 100;
    int max_random_modes = 5;
    int overlap_grid = 5;
    int overlap_states = 10;
    std::uint64_t seed = 20260101;
    int threads = 1;
};

inline ComplexMatrix haar_unitary(int n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix z(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            z(i, j) = Complex(g(rng), g(rng));
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        Complex dj = rmat(j, j);
        q.col(j) *= dj / std::abs(dj);
    }
    return q;
}

inline SpectralAmplitude random_jsa(const FrequencyGrid &grid, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(grid.size(), grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        for (int j = 0; j < grid.size(); ++j) {
            m(i, j) = Complex(g(rng), g(rng));
        }
    }
    return SpectralAmplitude::from_grid_matrix(grid, m);
}

namespace detail {

inline void record(OracleReport &rep, double diff, const std::string &label) {
    ++rep.cases_checked;
    if (diff > rep.max_abs_diff || rep.worst_case.empty()) {
        rep.max_abs_diff = diff;
        rep.worst_case = label;
    }
}

inline void compare_all_outputs(OracleReport &rep, const PairProductState &state, const ComplexMatrix &u,
                                const std::string &tag, std::size_t max_dim, int threads) {
    ModeOccupation r = state.occupation();
    ExternalDensityMatrix rho = external_density_matrix(state, max_dim, threads);
    auto ps = pair_order_particles(state);
    DenseExchange ex(ps);
    for_each_occupation(static_cast<int>(u.rows()), r.total(), [&](const std::vector<int> &c) {
        ModeOccupation s(c);
        double fast = transition_probability(rho, u, r, s);
        double slow = full_probability(ps, ex, u, s);
        record(rep, std::abs(fast - slow), "R=" + r.str() + " S=" + s.str() + " " + tag);
    });
}

}  // namespace detail

/// Fast path vs. full S_N path for the four-photon inputs of `reference` under
/// all four scenarios, plus randomized networks and spectra; cycle-contracted
/// overlaps vs. dense grid summation.
inline OracleReport run_validation(const ExperimentConfig &reference, const ValidationOptions &opt = {}) {
    OracleReport rep;
    for (Scenario sc : {Scenario::mutually_indistinguishable, Scenario::inter_cycle, Scenario::intra_cycle,
                        Scenario::mutually_distinguishable}) {
        auto delays = scenario_delays(sc, reference.distinguishable_delay);
        for (auto [p, q] : {std::pair{2, 0}, std::pair{1, 1}, std::pair{0, 2}}) {
            PairProductState st = build_pair_state(reference, p, q, delays);
            detail::compare_all_outputs(rep, st, reference.network, std::string("scenario=") + scenario_name(sc),
                                        reference.max_transversal, opt.threads);
        }
    }

    std::mt19937_64 rng(opt.seed);
    FrequencyGrid grid = FrequencyGrid::uniform(-1.0, 1.0, opt.overlap_grid);
    for (int k = 0; k < opt.random_cases; ++k) {
        int n = std::uniform_int_distribution<int>(2, opt.max_random_modes)(rng);
        std::uniform_int_distribution<int> mode(1, n);
        std::uniform_int_distribution<int> slot(0, 3);
        PairProductState st;
        st.modes = n;
        for (int p = 0; p < 2; ++p) {
            // Mostly one temporal mode, with occasional delayed photons.
            int sa = slot(rng) == 0 ? 1 : 0;
            int sb = slot(rng) == 0 ? 1 : 0;
            st.pairs.push_back(PhotonPair{random_jsa(grid, rng), mode(rng), mode(rng), sa, sb});
        }
        ComplexMatrix u = haar_unitary(n, rng);
        detail::compare_all_outputs(rep, st, u, "random#" + std::to_string(k), reference.max_transversal, 1);
    }

    for (int k = 0; k < opt.overlap_states; ++k) {
        int n = 4;
        std::uniform_int_distribution<int> mode(1, n);
        PairProductState st;
        st.modes = n;
        for (int p = 0; p < 2; ++p) {
            st.pairs.push_back(PhotonPair{random_jsa(grid, rng), mode(rng), mode(rng), 0, k % 3 == 2 ? 1 : 0});
        }
        ModeOccupation r = st.occupation();
        ExternalDensityMatrix rho = external_density_matrix(st);
        auto ps = detail::sorted_particles(st);
        detail::DenseExchange ex(ps);
        auto young = detail::stabilizer(ex.perms(), ps.mode);
        auto coset_sum = [&](const detail::Perm &sigma) {
            Complex acc(0.0);
            for (const auto &x : young) {
                detail::Perm left = detail::compose(detail::invert(x), sigma);
                for (const auto &x2 : young) {
                    acc += ex(detail::compose(left, x2));
                }
            }
            return acc;
        };
        detail::Perm id(ps.mode.size());
        std::iota(id.begin(), id.end(), 0);
        double z = coset_sum(id).real();
        const auto &t = rho.transversal;
        for (std::size_t mu = 0; mu < t.size(); ++mu) {
            for (std::size_t nu = 0; nu < t.size(); ++nu) {
                detail::Perm sigma =
                    detail::compose(t.representatives[mu].image(), detail::invert(t.representatives[nu].image()));
                Complex dense = coset_sum(sigma) / z;
                Complex fast = rho.entries(mu, nu) * static_cast<double>(t.size());
                rep.max_overlap_diff = std::max(rep.max_overlap_diff, std::abs(dense - fast));
                ++rep.overlaps_checked;
            }
        }
    }
    return rep;
}

}  // namespace suplaw::oracle
