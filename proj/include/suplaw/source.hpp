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

// Multi-pair statistics of two independent pulsed SPDC pair sources feeding
// channels (a,b) and (c,d), and the wiring of those channels onto the input
// modes of the network.

#include "suplaw/spectral.hpp"

#include <array>
#include <cmath>

namespace suplaw {

enum class Channel { a = 0, b = 1, c = 2, d = 3 };

inline constexpr std::array<const char *, 4> kChannelNames{"a", "b", "c", "d"};

struct SourceParams {
    double p_ab = 0.026;
    double p_cd = 0.033;
    SpectralAmplitude jsa_ab;
    SpectralAmplitude jsa_cd;
    int max_photons = 6;
    /// Highest pair number kept in the normalization series.
    int series_pairs = kMaxPairs;
};

/// Input mode (1-based) of each channel a..d.
struct ChannelWiring {
    std::array<int, 4> mode{1, 7, 3, 5};
    int modes = 7;

    void validate() const {
        for (int i = 0; i < 4; ++i) {
            if (mode[i] < 1 || mode[i] > modes) {
                throw ConfigError("ChannelWiring: channel " + std::string(kChannelNames[i]) +
                                  " mapped outside the network");
            }
            for (int j = 0; j < i; ++j) {
                if (mode[i] == mode[j]) {
                    throw ConfigError("ChannelWiring: two channels share input mode " + std::to_string(mode[i]));
                }
            }
        }
    }
};

struct InputStateRecord {
    std::array<int, 4> channel_occupation{};
    int photons = 0;
    int pairs_ab = 0;
    int pairs_cd = 0;
    ModeOccupation occupation;
    double p_gen = 0.0;
    double p_gen_norm = 0.0;
};

/// c^2 = 1 / sum_{P=0..maxP} p^P N_P / P!^2.
inline double normalization_constant(double p, const SpectralAmplitude &jsa, int max_pairs = kMaxPairs) {
    if (!(p >= 0.0 && p < 1.0)) {
        throw std::invalid_argument("normalization_constant: pair probability must lie in [0,1)");
    }
    double sum = 0.0;
    double prev = 1.0;
    for (int k = 0; k <= max_pairs; ++k) {
        double f = static_cast<double>(factorial(k));
        double term = std::pow(p, k) * normalization_np(jsa, k) / (f * f);
        if (k > 0 && prev > 0.0 && term >= prev) {
            throw std::invalid_argument("normalization_constant: series does not decay");
        }
        sum += term;
        prev = term;
    }
    return 1.0 / sum;
}

/// Caches N_P of both sources and their normalization constants.
class SourceModel {
   public:
    explicit SourceModel(const SourceParams &params) : params_(params) {
        if (!(params.p_ab > 0.0 && params.p_ab < 1.0) || !(params.p_cd > 0.0 && params.p_cd < 1.0)) {
            throw ConfigError("SourceParams: pair probabilities must lie in (0,1)");
        }
        if (params.max_photons % 2 != 0 || params.max_photons < 2 || params.max_photons > kMaxParticles) {
            throw ConfigError("SourceParams: max_photons must be even and at most " +
                              std::to_string(kMaxParticles));
        }
        for (int k = 0; k <= params.series_pairs; ++k) {
            np_ab_.push_back(normalization_np(params.jsa_ab, k));
            np_cd_.push_back(normalization_np(params.jsa_cd, k));
        }
        c2_ab_ = normalization_constant(params.p_ab, params.jsa_ab, params.series_pairs);
        c2_cd_ = normalization_constant(params.p_cd, params.jsa_cd, params.series_pairs);
    }

    const SourceParams &params() const { return params_; }
    double c2_ab() const { return c2_ab_; }
    double c2_cd() const { return c2_cd_; }
    double np_ab(int p) const { return np_ab_.at(p); }
    double np_cd(int q) const { return np_cd_.at(q); }

    /// p_{P,Q} = (c_ab c_cd)^2 p_ab^P p_cd^Q N_P N_Q / (P!^2 Q!^2).
    double generation_probability(int pairs_ab, int pairs_cd) const {
        if (pairs_ab < 0 || pairs_cd < 0) {
            throw std::invalid_argument("generation_probability: negative pair number");
        }
        if (2 * (pairs_ab + pairs_cd) > params_.max_photons) {
            throw std::invalid_argument("generation_probability: exceeds max_photons");
        }
        double fp = static_cast<double>(factorial(pairs_ab));
        double fq = static_cast<double>(factorial(pairs_cd));
        return c2_ab_ * c2_cd_ * std::pow(params_.p_ab, pairs_ab) * std::pow(params_.p_cd, pairs_cd) *
               np_ab_.at(pairs_ab) * np_cd_.at(pairs_cd) / (fp * fp * fq * fq);
    }

   private:
    SourceParams params_;
    std::vector<double> np_ab_, np_cd_;
    double c2_ab_ = 1.0, c2_cd_ = 1.0;
};

inline double generation_probability(int pairs_ab, int pairs_cd, const SourceParams &params) {
    return SourceModel(params).generation_probability(pairs_ab, pairs_cd);
}

/// Every (P,Q) with min_photons <= 2(P+Q) <= max_photons, grouped by photon
/// number and ordered by decreasing P; p_gen_norm normalizes over the list.
inline std::vector<InputStateRecord> enumerate_input_states(const SourceModel &model, const ChannelWiring &wiring,
                                                            int min_photons = 4) {
    wiring.validate();
    std::vector<InputStateRecord> out;
    double total = 0.0;
    for (int n = min_photons; n <= model.params().max_photons; n += 2) {
        for (int p = n / 2; p >= 0; --p) {
            int q = n / 2 - p;
            InputStateRecord rec;
            rec.channel_occupation = {p, p, q, q};
            rec.photons = n;
            rec.pairs_ab = p;
            rec.pairs_cd = q;
            std::vector<int> counts(wiring.modes, 0);
            for (int ch = 0; ch < 4; ++ch) {
                counts[wiring.mode[ch] - 1] += rec.channel_occupation[ch];
            }
            rec.occupation = ModeOccupation(std::move(counts));
            rec.p_gen = model.generation_probability(p, q);
            total += rec.p_gen;
            out.push_back(std::move(rec));
        }
    }
    for (auto &rec : out) {
        rec.p_gen_norm = rec.p_gen / total;
    }
    return out;
}

inline std::vector<InputStateRecord> enumerate_input_states(const SourceParams &params, const ChannelWiring &wiring,
                                                            int min_photons = 4) {
    return enumerate_input_states(SourceModel(params), wiring, min_photons);
}

}  // namespace suplaw
