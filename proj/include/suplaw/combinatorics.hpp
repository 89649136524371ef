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

// Permutation machinery for the coset-reduced interference formalism:
// permutations of particle labels, mode occupation / assignment lists, Young
// subgroups and their right transversals.
//
// Modes are 1-based everywhere in the public surface (mode j in {1..n}).
// Permutations act on particle positions and are stored 0-based as dense image
// arrays; cycle listings are reported 1-based.

#include "suplaw/core.hpp"

#include <map>
#include <numeric>
#include <sstream>

namespace suplaw {

/// Default cap on the particle number handled by group enumerations.
inline constexpr int kMaxParticles = 8;

class Permutation {
   public:
    Permutation() = default;

    /// `image[i]` is the image of position i (0-based).
    explicit Permutation(std::vector<int> image) : image_(std::move(image)) {
        std::vector<char> seen(image_.size(), 0);
        for (int v : image_) {
            if (v < 0 || v >= static_cast<int>(image_.size()) || seen[v]) {
                throw std::invalid_argument("Permutation: image is not a bijection");
            }
            seen[v] = 1;
        }
    }

    static Permutation identity(int n) {
        std::vector<int> img(n);
        std::iota(img.begin(), img.end(), 0);
        return Permutation(std::move(img));
    }

    /// Builds from a 1-based mapping list such as {7,6,5,4,3,2,1}.
    static Permutation from_one_based(const std::vector<int> &mapping) {
        std::vector<int> img(mapping.size());
        for (std::size_t i = 0; i < mapping.size(); ++i) {
            img[i] = mapping[i] - 1;
        }
        return Permutation(std::move(img));
    }

    int size() const { return static_cast<int>(image_.size()); }
    int operator()(int i) const { return image_[i]; }
    const std::vector<int> &image() const { return image_; }

    std::vector<int> one_based() const {
        std::vector<int> r(image_);
        for (int &v : r) {
            ++v;
        }
        return r;
    }

    /// Composition (a * b)(i) = a(b(i)).
    friend Permutation operator*(const Permutation &a, const Permutation &b) {
        if (a.size() != b.size()) {
            throw std::invalid_argument("Permutation: size mismatch in composition");
        }
        std::vector<int> img(a.size());
        for (int i = 0; i < a.size(); ++i) {
            img[i] = a.image_[b.image_[i]];
        }
        Permutation r;
        r.image_ = std::move(img);
        return r;
    }

    Permutation inverse() const {
        std::vector<int> img(image_.size());
        for (int i = 0; i < size(); ++i) {
            img[image_[i]] = i;
        }
        Permutation r;
        r.image_ = std::move(img);
        return r;
    }

    bool is_identity() const {
        for (int i = 0; i < size(); ++i) {
            if (image_[i] != i) {
                return false;
            }
        }
        return true;
    }

    /// Lexicographic rank in S_n (Lehmer code), used as a dense cache key.
    std::uint64_t rank() const {
        std::uint64_t r = 0;
        int n = size();
        for (int i = 0; i < n; ++i) {
            int smaller = 0;
            for (int j = i + 1; j < n; ++j) {
                if (image_[j] < image_[i]) {
                    ++smaller;
                }
            }
            r = r * static_cast<std::uint64_t>(n - i) + static_cast<std::uint64_t>(smaller);
        }
        return r;
    }

    bool operator==(const Permutation &o) const { return image_ == o.image_; }
    bool operator<(const Permutation &o) const { return image_ < o.image_; }

    std::string str() const {
        std::ostringstream os;
        os << '[';
        for (int i = 0; i < size(); ++i) {
            os << (i ? "," : "") << image_[i] + 1;
        }
        os << ']';
        return os.str();
    }

   private:
    std::vector<int> image_;
};

/// Disjoint cycles of `p`, each listed 1-based starting from its smallest
/// element; cycles ordered by that element. Fixed points appear as 1-cycles.
inline std::vector<std::vector<int>> cycle_decomposition(const Permutation &p) {
    std::vector<std::vector<int>> cycles;
    std::vector<char> seen(p.size(), 0);
    for (int start = 0; start < p.size(); ++start) {
        if (seen[start]) {
            continue;
        }
        std::vector<int> cyc;
        for (int i = start; !seen[i]; i = p(i)) {
            seen[i] = 1;
            cyc.push_back(i + 1);
        }
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

/// The mode mirror j -> n+1-j.
inline Permutation mirror_permutation(int n) {
    std::vector<int> img(n);
    for (int i = 0; i < n; ++i) {
        img[i] = n - 1 - i;
    }
    return Permutation(std::move(img));
}

/// All n! permutations in lexicographic order of their image arrays.
inline std::vector<Permutation> all_permutations(int n) {
    if (n > kMaxParticles) {
        throw ResourceError("all_permutations: n=" + std::to_string(n) + " exceeds cap " +
                            std::to_string(kMaxParticles));
    }
    std::vector<Permutation> out;
    out.reserve(factorial(n));
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    do {
        out.emplace_back(img);
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

/// Photon count per mode.
struct ModeOccupation {
    std::vector<int> counts;

    ModeOccupation() = default;
    explicit ModeOccupation(std::vector<int> c) : counts(std::move(c)) {
        for (int v : counts) {
            if (v < 0) {
                throw std::invalid_argument("ModeOccupation: negative occupation");
            }
        }
    }

    int modes() const { return static_cast<int>(counts.size()); }
    int total() const { return std::accumulate(counts.begin(), counts.end(), 0); }
    /// 1-based accessor.
    int operator[](int mode) const { return counts.at(mode - 1); }

    bool operator==(const ModeOccupation &o) const { return counts == o.counts; }
    bool operator<(const ModeOccupation &o) const { return counts < o.counts; }

    std::string str() const {
        std::ostringstream os;
        os << '(';
        for (std::size_t i = 0; i < counts.size(); ++i) {
            os << (i ? "," : "") << counts[i];
        }
        os << ')';
        return os.str();
    }
};

/// Per-particle mode list (1-based modes), canonical form sorted.
struct ModeAssignment {
    std::vector<int> modes;

    int particles() const { return static_cast<int>(modes.size()); }
    bool operator==(const ModeAssignment &o) const { return modes == o.modes; }
};

inline ModeAssignment assignment_from_occupation(const ModeOccupation &r) {
    ModeAssignment e;
    for (int j = 0; j < r.modes(); ++j) {
        for (int k = 0; k < r.counts[j]; ++k) {
            e.modes.push_back(j + 1);
        }
    }
    return e;
}

inline ModeOccupation occupation_from_assignment(const ModeAssignment &e, int n) {
    std::vector<int> counts(n, 0);
    for (int m : e.modes) {
        if (m < 1 || m > n) {
            throw std::invalid_argument("occupation_from_assignment: mode out of range");
        }
        ++counts[m - 1];
    }
    return ModeOccupation(std::move(counts));
}

/// E_mu: the list (E_{mu(1)}, ..., E_{mu(N)}).
inline std::vector<int> permute_assignment(const ModeAssignment &e, const Permutation &mu) {
    std::vector<int> out(e.modes.size());
    for (std::size_t a = 0; a < out.size(); ++a) {
        out[a] = e.modes[mu(static_cast<int>(a))];
    }
    return out;
}

/// |S_R| = prod_j R_j!.
inline std::uint64_t young_subgroup_order(const ModeOccupation &r) {
    std::uint64_t order = 1;
    for (int c : r.counts) {
        order *= factorial(c);
    }
    return order;
}

/// Elements of the Young subgroup S_R acting on the canonical assignment of R:
/// permutations that only shuffle particles sharing a mode.
inline std::vector<Permutation> young_subgroup_elements(const ModeOccupation &r) {
    int n_particles = r.total();
    if (n_particles > kMaxParticles) {
        throw ResourceError("young_subgroup_elements: N exceeds cap");
    }
    std::vector<std::vector<int>> blocks;
    int offset = 0;
    for (int c : r.counts) {
        if (c > 0) {
            std::vector<int> b(c);
            std::iota(b.begin(), b.end(), offset);
            blocks.push_back(std::move(b));
        }
        offset += c;
    }
    std::vector<Permutation> out;
    out.reserve(young_subgroup_order(r));
    std::vector<int> img(n_particles);
    std::iota(img.begin(), img.end(), 0);
    // Odometer over per-block permutations.
    std::vector<std::vector<int>> state;
    for (const auto &b : blocks) {
        state.push_back(b);
    }
    while (true) {
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            for (std::size_t i = 0; i < blocks[k].size(); ++i) {
                img[blocks[k][i]] = state[k][i];
            }
        }
        out.emplace_back(img);
        std::size_t k = 0;
        for (; k < state.size(); ++k) {
            if (std::next_permutation(state[k].begin(), state[k].end())) {
                break;
            }
        }
        if (k == state.size()) {
            break;
        }
    }
    return out;
}

/// Right transversal of S_R in S_N: one representative mu per distinct
/// ordering E_mu of the canonical assignment. Every pi in S_N factors uniquely
/// as xi * mu with xi in S_R.
struct Transversal {
    ModeOccupation occupation;
    ModeAssignment assignment;
    std::vector<Permutation> representatives;
    /// Induced assignment list of each representative, lexicographically
    /// increasing.
    std::vector<std::vector<int>> orderings;

    std::size_t size() const { return representatives.size(); }

    /// Index of the representative whose induced ordering equals `ordering`,
    /// or -1 if `ordering` is not an ordering of the canonical assignment.
    long index_of(const std::vector<int> &ordering) const {
        auto it = std::lower_bound(orderings.begin(), orderings.end(), ordering);
        if (it == orderings.end() || *it != ordering) {
            return -1;
        }
        return static_cast<long>(it - orderings.begin());
    }
};

inline Transversal right_transversal(const ModeOccupation &r, int max_particles = kMaxParticles) {
    int n_particles = r.total();
    if (n_particles > max_particles) {
        throw ResourceError("right_transversal: N=" + std::to_string(n_particles) +
                            " exceeds cap " + std::to_string(max_particles));
    }
    Transversal t;
    t.occupation = r;
    t.assignment = assignment_from_occupation(r);
    const auto &e = t.assignment.modes;
    // First particle index occupying each mode in the canonical assignment.
    std::map<int, int> first_index;
    for (int a = n_particles - 1; a >= 0; --a) {
        first_index[e[a]] = a;
    }
    std::vector<int> ordering = e;
    do {
        std::map<int, int> used;
        std::vector<int> img(n_particles);
        for (int a = 0; a < n_particles; ++a) {
            int m = ordering[a];
            img[a] = first_index[m] + used[m]++;
        }
        t.representatives.emplace_back(std::move(img));
        t.orderings.push_back(ordering);
    } while (std::next_permutation(ordering.begin(), ordering.end()));
    return t;
}

}  // namespace suplaw
