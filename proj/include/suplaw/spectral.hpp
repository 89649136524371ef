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

// Internal (frequency) degrees of freedom of SPDC photon pairs.
//
// Frequencies are angular offsets from the degenerate centre frequency in
// rad/ps; delays are in ps; wavelengths in nm. A constant phase exp(i w0 tau)
// common to all grid points cancels in every overlap and is dropped.
//
// Exchange integrals over products of pair amplitudes are never evaluated on
// N-dimensional grids: each permutation term is split into cycles of the
// bipartite (amplitude, conjugate amplitude) graph and contracted as a trace
// of d x d matrix products.

#include "suplaw/combinatorics.hpp"

#include <array>
#include <cmath>
#include <optional>

namespace suplaw {

/// Speed of light in nm/ps.
inline constexpr double kSpeedOfLight = 299792.458;

/// Angular frequency (rad/ps) of vacuum wavelength `nm`.
inline double angular_frequency(double nm) { return 2.0 * kPi * kSpeedOfLight / nm; }

/// Angular-frequency width of a wavelength interval `width_nm` around `center_nm`.
inline double angular_width(double width_nm, double center_nm) {
    return 2.0 * kPi * kSpeedOfLight * width_nm / (center_nm * center_nm);
}

struct FrequencyGrid {
    std::vector<double> points;

    static FrequencyGrid uniform(double lo, double hi, int d) {
        if (d < 2) {
            throw std::invalid_argument("FrequencyGrid: need at least two points");
        }
        if (!(hi > lo)) {
            throw std::invalid_argument("FrequencyGrid: empty range");
        }
        FrequencyGrid g;
        g.points.resize(d);
        for (int i = 0; i < d; ++i) {
            g.points[i] = lo + (hi - lo) * i / (d - 1);
        }
        return g;
    }

    int size() const { return static_cast<int>(points.size()); }
    double spacing() const { return points[1] - points[0]; }
    /// Quadrature weight per point.
    double weight() const { return spacing(); }

    bool operator==(const FrequencyGrid &o) const { return points == o.points; }
};

/// Joint spectral amplitude Phi(w, w') sampled on a shared grid; rows index the
/// first photon, columns the second. Normalized so sum |Phi|^2 weight^2 = 1.
struct SpectralAmplitude {
    FrequencyGrid grid;
    ComplexMatrix amps;
    /// Set when the builder detected truncation of the spectrum by the grid.
    std::optional<std::string> warning;

    int size() const { return grid.size(); }

    /// Phi * weight: the unit-Frobenius-norm matrix used in all contractions.
    ComplexMatrix grid_matrix() const { return amps * grid.weight(); }

    double norm() const { return std::sqrt(amps.squaredNorm()) * grid.weight(); }

    static SpectralAmplitude from_grid_matrix(FrequencyGrid g, const ComplexMatrix &m) {
        if (m.rows() != g.size() || m.cols() != g.size()) {
            throw std::invalid_argument("SpectralAmplitude: matrix does not match grid");
        }
        double fro = m.norm();
        if (!(fro > 0.0)) {
            throw std::invalid_argument("SpectralAmplitude: zero amplitude");
        }
        SpectralAmplitude s;
        s.amps = m / (fro * g.weight());
        s.grid = std::move(g);
        return s;
    }
};

/// Gaussian JSA parameters; widths are intensity FWHM in nm, offsets shift the
/// filter centre wavelengths of the two photons. The pump is centred at half
/// the photon centre wavelength.
struct GaussianJsaParams {
    double pump_fwhm_nm = 0.4;
    double filter_fwhm_nm = 3.0;
    double offset_a_nm = 0.0;
    double offset_b_nm = 0.0;
    double center_nm = 795.0;
};

namespace detail {

inline double gaussian_amplitude(double x, double intensity_fwhm) {
    return std::exp(-2.0 * std::log(2.0) * x * x / (intensity_fwhm * intensity_fwhm));
}

inline double filter_center_offset(double offset_nm, double center_nm) {
    return angular_frequency(center_nm + offset_nm) - angular_frequency(center_nm);
}

inline ComplexMatrix gaussian_samples(const GaussianJsaParams &p, const std::vector<double> &w) {
    const double pump = angular_width(p.pump_fwhm_nm, 0.5 * p.center_nm);
    const double filt = angular_width(p.filter_fwhm_nm, p.center_nm);
    const double ca = filter_center_offset(p.offset_a_nm, p.center_nm);
    const double cb = filter_center_offset(p.offset_b_nm, p.center_nm);
    const int d = static_cast<int>(w.size());
    ComplexMatrix m(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            m(i, j) = gaussian_amplitude(w[i] + w[j], pump) * gaussian_amplitude(w[i] - ca, filt) *
                      gaussian_amplitude(w[j] - cb, filt);
        }
    }
    return m;
}

}  // namespace detail

/// Grid spanning `span_fwhm` filter widths beyond the outermost filter centre
/// on either side, d points.
inline FrequencyGrid filter_grid(double filter_fwhm_nm, double center_nm, double max_abs_offset_nm,
                                 int d = 17, double span_fwhm = 4.0) {
    const double filt = angular_width(filter_fwhm_nm, center_nm);
    const double lo = detail::filter_center_offset(max_abs_offset_nm, center_nm) - span_fwhm * filt;
    const double hi = detail::filter_center_offset(-max_abs_offset_nm, center_nm) + span_fwhm * filt;
    return FrequencyGrid::uniform(lo, hi, d);
}

/// Phi(w, w') = pump(w + w') filterA(w - cA) filterB(w' - cB), normalized on
/// `grid`. A warning is attached when more than 1% of the spectral mass lies
/// outside the grid.
inline SpectralAmplitude build_gaussian_jsa(const GaussianJsaParams &p, const FrequencyGrid &grid) {
    if (!(p.pump_fwhm_nm > 0.0) || !(p.filter_fwhm_nm > 0.0) || !(p.center_nm > 0.0)) {
        throw std::invalid_argument("build_gaussian_jsa: widths and centre must be positive");
    }
    ComplexMatrix m = detail::gaussian_samples(p, grid.points);
    // Same spacing, three times the extent: estimates the truncated mass.
    const int d = grid.size();
    std::vector<double> wide(3 * d);
    for (int i = 0; i < 3 * d; ++i) {
        wide[i] = grid.points[0] + (i - d) * grid.spacing();
    }
    double inside = m.squaredNorm();
    double total = detail::gaussian_samples(p, wide).squaredNorm();
    SpectralAmplitude s = SpectralAmplitude::from_grid_matrix(grid, m);
    double lost = total > 0.0 ? 1.0 - inside / total : 1.0;
    if (lost > 0.01) {
        s.warning = "grid truncates " + std::to_string(100.0 * lost) + "% of the spectral mass";
    }
    return s;
}

/// Frequency-uncorrelated product phi(w) phi(w') with Gaussian phi.
inline SpectralAmplitude build_separable_jsa(const FrequencyGrid &grid, double center, double fwhm) {
    const int d = grid.size();
    ComplexMatrix m(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            m(i, j) = detail::gaussian_amplitude(grid.points[i] - center, fwhm) *
                      detail::gaussian_amplitude(grid.points[j] - center, fwhm);
        }
    }
    return SpectralAmplitude::from_grid_matrix(grid, m);
}

/// Strict energy anticorrelation w + w' = const on the grid (flat along the
/// antidiagonal): the maximally correlated limit the grid can represent.
inline SpectralAmplitude build_antidiagonal_jsa(const FrequencyGrid &grid) {
    const int d = grid.size();
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        m(i, d - 1 - i) = 1.0;
    }
    return SpectralAmplitude::from_grid_matrix(grid, m);
}

enum class Axis { first, second };

/// Multiplies the amplitude by exp(i w tau) along one photon's frequency axis.
inline SpectralAmplitude apply_delay(const SpectralAmplitude &jsa, Axis axis, double tau) {
    if (!std::isfinite(tau)) {
        throw std::invalid_argument("apply_delay: delay must be finite");
    }
    SpectralAmplitude out = jsa;
    for (int i = 0; i < jsa.size(); ++i) {
        Complex ph = std::polar(1.0, jsa.grid.points[i] * tau);
        if (axis == Axis::first) {
            out.amps.row(i) *= ph;
        } else {
            out.amps.col(i) *= ph;
        }
    }
    return out;
}

/// Re sum Phi(w, w') Phi*(w', w): two-photon dip visibility of the pair on a
/// balanced beamsplitter.
inline double pair_exchange_visibility(const SpectralAmplitude &jsa) {
    ComplexMatrix m = jsa.grid_matrix();
    return (m.array() * m.transpose().conjugate().array()).sum().real();
}

/// Reduced single-photon spectral density operator of one axis.
inline ComplexMatrix reduced_density(const SpectralAmplitude &jsa, Axis axis) {
    ComplexMatrix m = jsa.grid_matrix();
    if (axis == Axis::first) {
        return m * m.adjoint();
    }
    return m.transpose() * m.conjugate();
}

/// Tr(rho_A rho_B) of the heralded single photons on the chosen axes.
inline double heralded_visibility(const SpectralAmplitude &a, const SpectralAmplitude &b, Axis axis_a,
                                  Axis axis_b) {
    if (!(a.grid == b.grid)) {
        throw std::invalid_argument("heralded_visibility: amplitudes live on different grids");
    }
    ComplexMatrix ra = reduced_density(a, axis_a);
    ComplexMatrix rb = reduced_density(b, axis_b);
    return (ra * rb).trace().real();
}

/// Largest pair count accepted by normalization_np.
inline constexpr int kMaxPairs = 4;

/// Multi-pair normalization N_P: the double sum over intra-mode orderings,
/// reduced to P! sum_{tau in S_P} prod_{cycles c} tr(H^{|c|}) with
/// H = conj(Phi) Phi^T on the grid.
inline double normalization_np(const SpectralAmplitude &jsa, int pairs) {
    if (pairs < 0) {
        throw std::invalid_argument("normalization_np: negative pair count");
    }
    if (pairs > kMaxPairs) {
        throw ResourceError("normalization_np: P=" + std::to_string(pairs) + " exceeds cap " +
                            std::to_string(kMaxPairs));
    }
    if (pairs <= 1) {
        return 1.0;
    }
    ComplexMatrix m = jsa.grid_matrix();
    ComplexMatrix h = m.conjugate() * m.transpose();
    std::vector<double> traces(pairs + 1, 0.0);
    ComplexMatrix power = h;
    for (int k = 1; k <= pairs; ++k) {
        traces[k] = power.trace().real();
        if (k < pairs) {
            power = power * h;
        }
    }
    double sum = 0.0;
    for (const auto &tau : all_permutations(pairs)) {
        double term = 1.0;
        for (const auto &c : cycle_decomposition(tau)) {
            term *= traces[c.size()];
        }
        sum += term;
    }
    return static_cast<double>(factorial(pairs)) * sum;
}

/// One emitted pair: its amplitude (with any spectral phases applied), the
/// input modes of its two photons, and their temporal-mode labels. Photons
/// with different labels are orthogonal in time (delay far beyond the
/// coherence time).
struct PhotonPair {
    SpectralAmplitude jsa;
    int mode_a = 1;
    int mode_b = 1;
    int slot_a = 0;
    int slot_b = 0;
};

/// Product of pair amplitudes over all emitted pairs.
struct PairProductState {
    int modes = 0;
    std::vector<PhotonPair> pairs;

    int photons() const { return 2 * static_cast<int>(pairs.size()); }

    ModeOccupation occupation() const {
        std::vector<int> c(modes, 0);
        for (const auto &p : pairs) {
            if (p.mode_a < 1 || p.mode_a > modes || p.mode_b < 1 || p.mode_b > modes) {
                throw std::invalid_argument("PairProductState: input mode out of range");
            }
            ++c[p.mode_a - 1];
            ++c[p.mode_b - 1];
        }
        return ModeOccupation(std::move(c));
    }
};

/// Assignment of pair photons to particle labels of the canonical (sorted)
/// mode assignment list: particles of one mode are consecutive, and pairs
/// take the next free label of their modes in order.
struct ParticleLayout {
    std::vector<int> pair_of;
    std::vector<int> side_of;
    std::vector<int> slot_of;
    std::vector<std::array<int, 2>> particles_of_pair;

    explicit ParticleLayout(const PairProductState &state) {
        ModeOccupation r = state.occupation();
        const int n_particles = r.total();
        std::vector<int> next(r.modes(), 0);
        for (int m = 1; m < r.modes(); ++m) {
            next[m] = next[m - 1] + r.counts[m - 1];
        }
        pair_of.assign(n_particles, -1);
        side_of.assign(n_particles, -1);
        slot_of.assign(n_particles, 0);
        for (std::size_t p = 0; p < state.pairs.size(); ++p) {
            const auto &pr = state.pairs[p];
            int a = next[pr.mode_a - 1]++;
            int b = next[pr.mode_b - 1]++;
            pair_of[a] = pair_of[b] = static_cast<int>(p);
            side_of[a] = 0;
            side_of[b] = 1;
            slot_of[a] = pr.slot_a;
            slot_of[b] = pr.slot_b;
            particles_of_pair.push_back({a, b});
        }
    }
};

/// Exchange integrals I(pi) = int Phi*(w_pi) Phi(w) dw over all pi in S_N for
/// one pair-product state, tabulated by permutation rank.
class ExchangeTable {
   public:
    explicit ExchangeTable(const PairProductState &state, int threads = 1) : layout_(state) {
        n_ = state.photons();
        if (n_ > kMaxParticles) {
            throw ResourceError("ExchangeTable: N=" + std::to_string(n_) + " exceeds cap");
        }
        if (state.pairs.empty()) {
            values_.assign(1, Complex(1.0));
            return;
        }
        const FrequencyGrid &g = state.pairs.front().jsa.grid;
        for (const auto &p : state.pairs) {
            if (!(p.jsa.grid == g)) {
                throw std::invalid_argument("ExchangeTable: all pairs must share one frequency grid");
            }
            ComplexMatrix m = p.jsa.grid_matrix();
            mats_.push_back(m);
            mats_t_.push_back(m.transpose());
            conj_.push_back(m.conjugate());
            conj_t_.push_back(m.adjoint());
        }
        auto perms = all_permutations(n_);
        values_.assign(perms.size(), Complex(0.0));
        parallel_for(perms.size(), threads, [&](std::size_t i) {
            values_[perms[i].rank()] = contract(perms[i]);
        });
    }

    int particles() const { return n_; }
    const ParticleLayout &layout() const { return layout_; }

    Complex operator()(const Permutation &pi) const { return values_[pi.rank()]; }

    /// Cycle contraction of a single permutation term.
    Complex contract(const Permutation &pi) const {
        for (int a = 0; a < n_; ++a) {
            if (layout_.slot_of[pi(a)] != layout_.slot_of[a]) {
                return Complex(0.0);
            }
        }
        Permutation inv = pi.inverse();
        const int n_pairs = static_cast<int>(mats_.size());
        std::vector<char> done(n_pairs, 0);
        Complex result(1.0);
        for (int start = 0; start < n_pairs; ++start) {
            if (done[start]) {
                continue;
            }
            ComplexMatrix acc;
            bool first = true;
            int p = start;
            int side_in = 0;
            while (true) {
                done[p] = 1;
                const ComplexMatrix &ket = side_in == 0 ? mats_[p] : mats_t_[p];
                if (first) {
                    acc = ket;
                    first = false;
                } else {
                    acc = acc * ket;
                }
                int out_var = layout_.particles_of_pair[p][1 - side_in];
                int beta = inv(out_var);
                int q = layout_.pair_of[beta];
                int s = layout_.side_of[beta];
                acc = acc * (s == 0 ? conj_[q] : conj_t_[q]);
                int next_var = pi(layout_.particles_of_pair[q][1 - s]);
                p = layout_.pair_of[next_var];
                side_in = layout_.side_of[next_var];
                if (p == start) {
                    break;
                }
            }
            result *= acc.trace();
        }
        return result;
    }

   private:
    ParticleLayout layout_;
    int n_ = 0;
    std::vector<ComplexMatrix> mats_, mats_t_, conj_, conj_t_;
    std::vector<Complex> values_;
};

/// Reduced external state [rho_E]_{mu nu} = <Omega_nu|Omega_mu> / |Sigma| in the
/// basis of transversal orderings.
struct ExternalDensityMatrix {
    Transversal transversal;
    ComplexMatrix entries;

    std::size_t dim() const { return transversal.size(); }
};

namespace detail {

/// Unnormalized sum_{xi, xi' in S_R} I(xi^{-1} sigma xi').
inline Complex coset_exchange_sum(const ExchangeTable &table, const std::vector<Permutation> &young,
                                  const std::vector<Permutation> &young_inv, const Permutation &sigma) {
    Complex s(0.0);
    for (std::size_t i = 0; i < young.size(); ++i) {
        Permutation left = young_inv[i] * sigma;
        for (const auto &xi2 : young) {
            s += table(left * xi2);
        }
    }
    return s;
}

}  // namespace detail

/// Builds rho_E for the occupation generated by `state`.
inline ExternalDensityMatrix external_density_matrix(const PairProductState &state,
                                                     std::size_t max_dim = 5040, int threads = 1) {
    ModeOccupation r = state.occupation();
    Transversal t = right_transversal(r);
    if (t.size() > max_dim) {
        throw ResourceError("external_density_matrix: transversal size " + std::to_string(t.size()) +
                            " exceeds cap " + std::to_string(max_dim));
    }
    ExchangeTable table(state, threads);
    auto young = young_subgroup_elements(r);
    std::vector<Permutation> young_inv;
    for (const auto &x : young) {
        young_inv.push_back(x.inverse());
    }
    Complex z = detail::coset_exchange_sum(table, young, young_inv, Permutation::identity(r.total()));
    if (!(z.real() > 0.0)) {
        throw NumericalError("external_density_matrix: vanishing internal-state norm");
    }
    const std::size_t dim = t.size();
    ExternalDensityMatrix rho{t, ComplexMatrix(dim, dim)};
    std::vector<Permutation> inv;
    for (const auto &nu : t.representatives) {
        inv.push_back(nu.inverse());
    }
    const double scale = 1.0 / (z.real() * static_cast<double>(dim));
    parallel_for(dim, threads, [&](std::size_t mu) {
        for (std::size_t nu = 0; nu < dim; ++nu) {
            if (mu == nu) {
                rho.entries(mu, nu) = 1.0 / static_cast<double>(dim);
                continue;
            }
            Permutation sigma = t.representatives[mu] * inv[nu];
            rho.entries(mu, nu) = detail::coset_exchange_sum(table, young, young_inv, sigma) * scale;
        }
    });
    return rho;
}

/// <Omega_nu|Omega_mu> for transversal elements mu, nu of the state's occupation.
inline Complex internal_overlap(const PairProductState &state, const ModeOccupation &r, const Permutation &mu,
                                const Permutation &nu) {
    if (!(state.occupation() == r)) {
        throw std::invalid_argument("internal_overlap: occupation does not match the state");
    }
    ExchangeTable table(state);
    auto young = young_subgroup_elements(r);
    std::vector<Permutation> young_inv;
    for (const auto &x : young) {
        young_inv.push_back(x.inverse());
    }
    Complex z = detail::coset_exchange_sum(table, young, young_inv, Permutation::identity(r.total()));
    return detail::coset_exchange_sum(table, young, young_inv, mu * nu.inverse()) / z.real();
}

/// ||P^{(x)N} rho_E - rho_E||_max for a mode permutation P acting on 1-based
/// modes. Zero means rho_E lies in the +1 eigenspace of P^{(x)N} and hence
/// commutes with it.
inline double check_symmetry(const ExternalDensityMatrix &rho, const Permutation &mode_perm) {
    const auto &t = rho.transversal;
    const std::size_t dim = t.size();
    std::vector<long> image(dim);
    for (std::size_t mu = 0; mu < dim; ++mu) {
        std::vector<int> o = t.orderings[mu];
        for (int &m : o) {
            if (m < 1 || m > mode_perm.size()) {
                throw std::invalid_argument("check_symmetry: mode permutation too small");
            }
            m = mode_perm(m - 1) + 1;
        }
        image[mu] = t.index_of(o);
        if (image[mu] < 0) {
            throw std::invalid_argument("check_symmetry: permutation does not preserve the input occupation");
        }
    }
    double worst = 0.0;
    for (std::size_t mu = 0; mu < dim; ++mu) {
        for (std::size_t nu = 0; nu < dim; ++nu) {
            worst = std::max(worst, std::abs(rho.entries(image[mu], nu) - rho.entries(mu, nu)));
        }
    }
    return worst;
}

}  // namespace suplaw
