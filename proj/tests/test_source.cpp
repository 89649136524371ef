#include "suplaw/source.hpp"

#include <gtest/gtest.h>

using namespace suplaw;

namespace {

SourceParams reference_params(int max_photons = 6) {
    SourceParams p;
    FrequencyGrid g = filter_grid(3.0, 795.0, 0.4);
    p.jsa_ab = build_gaussian_jsa({0.4, 3.0, -0.3125, 0.3125, 795.0}, g);
    p.jsa_cd = build_gaussian_jsa({0.4, 3.0, -0.4, 0.4, 795.0}, g);
    p.max_photons = max_photons;
    return p;
}

SpectralAmplitude separable() {
    return build_separable_jsa(FrequencyGrid::uniform(-5.0, 5.0, 21), 0.0, 2.0);
}

}  // namespace

TEST(NormalizationConstant, Limits) {
    EXPECT_EQ(normalization_constant(0.0, separable()), 1.0);
    // Separable: truncated geometric series.
    const double p = 0.03;
    EXPECT_NEAR(normalization_constant(p, separable()), (1 - p) / (1 - std::pow(p, 5)), 1e-12);
    EXPECT_NEAR(normalization_constant(p, separable()), 1 - p, 1e-7);
    EXPECT_THROW(normalization_constant(1.0, separable()), std::invalid_argument);
    EXPECT_THROW(normalization_constant(-0.1, separable()), std::invalid_argument);
}

TEST(NormalizationConstant, CalibratedPartialSum) {
    auto params = reference_params();
    double n2 = normalization_np(params.jsa_ab, 2);
    double n3 = normalization_np(params.jsa_ab, 3);
    double n4 = normalization_np(params.jsa_ab, 4);
    const double p = 0.026;
    double expect = 1.0 / (1 + p + p * p * n2 / 4 + std::pow(p, 3) * n3 / 36 + std::pow(p, 4) * n4 / 576);
    EXPECT_NEAR(normalization_constant(p, params.jsa_ab), expect, 1e-15);
    EXPECT_NEAR(expect, 0.9741, 5e-4);
}

TEST(GenerationProbability, TableRows) {
    auto params = reference_params();
    EXPECT_NEAR(generation_probability(2, 0, params) / 0.000493, 1.0, 0.05);
    EXPECT_NEAR(generation_probability(1, 1, params) / 0.000788, 1.0, 0.05);
    EXPECT_NEAR(generation_probability(0, 0, params), 0.94, 0.01);
    EXPECT_THROW(generation_probability(3, 1, params), std::invalid_argument);
    EXPECT_THROW(generation_probability(-1, 1, params), std::invalid_argument);
}

TEST(GenerationProbability, RatioDependsOnlyOnN2) {
    auto params = reference_params();
    SourceModel m(params);
    double ratio = m.generation_probability(2, 0) / m.generation_probability(1, 1);
    EXPECT_NEAR(ratio, params.p_ab * m.np_ab(2) / (4.0 * params.p_cd), 1e-14);
}

TEST(GenerationProbability, SumsBelowOneAndConverges) {
    double prev = 0.0;
    for (int maxn : {2, 4, 6, 8}) {
        auto params = reference_params(maxn);
        SourceModel m(params);
        double sum = 0.0;
        for (int p = 0; 2 * p <= maxn; ++p) {
            for (int q = 0; 2 * (p + q) <= maxn; ++q) {
                sum += m.generation_probability(p, q);
            }
        }
        EXPECT_LE(sum, 1.0 + 1e-15);
        EXPECT_GT(sum, prev);
        prev = sum;
    }
    EXPECT_GT(prev, 1.0 - 1e-5);
}

TEST(Enumerate, SixPhotonTable) {
    auto recs = enumerate_input_states(reference_params(), ChannelWiring{});
    ASSERT_EQ(recs.size(), 7u);
    const std::vector<std::vector<int>> expect{{2, 0, 0, 0, 0, 0, 2}, {1, 0, 1, 0, 1, 0, 1}, {0, 0, 2, 0, 2, 0, 0},
                                               {3, 0, 0, 0, 0, 0, 3}, {2, 0, 1, 0, 1, 0, 2}, {1, 0, 2, 0, 2, 0, 1},
                                               {0, 0, 3, 0, 3, 0, 0}};
    double norm = 0.0, six = 0.0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        EXPECT_EQ(recs[i].occupation.counts, expect[i]);
        const auto &c = recs[i].channel_occupation;
        EXPECT_EQ(c[0] + c[1] + c[2] + c[3], recs[i].photons);
        norm += recs[i].p_gen_norm;
        if (recs[i].photons == 6) {
            six += recs[i].p_gen_norm;
        }
    }
    EXPECT_NEAR(norm, 1.0, 1e-14);
    EXPECT_NEAR(six, 0.030, 0.003);
}

TEST(Enumerate, FourPhotonOnly) {
    auto recs = enumerate_input_states(reference_params(4), ChannelWiring{});
    ASSERT_EQ(recs.size(), 3u);
    EXPECT_EQ(recs[1].occupation.counts, (std::vector<int>{1, 0, 1, 0, 1, 0, 1}));
}

TEST(Enumerate, SwappingSourcesRelabels) {
    auto a = reference_params();
    auto b = a;
    std::swap(b.p_ab, b.p_cd);
    std::swap(b.jsa_ab, b.jsa_cd);
    ChannelWiring wa;
    ChannelWiring wb;
    wb.mode = {3, 5, 1, 7};
    auto ra = enumerate_input_states(a, wa);
    auto rb = enumerate_input_states(b, wb);
    ASSERT_EQ(ra.size(), rb.size());
    for (const auto &x : ra) {
        auto it = std::find_if(rb.begin(), rb.end(), [&](const InputStateRecord &y) {
            return y.pairs_ab == x.pairs_cd && y.pairs_cd == x.pairs_ab;
        });
        ASSERT_NE(it, rb.end());
        EXPECT_EQ(it->occupation, x.occupation);
        EXPECT_NEAR(it->p_gen, x.p_gen, 1e-18);
    }
}

TEST(Wiring, Validation) {
    ChannelWiring w;
    EXPECT_NO_THROW(w.validate());
    w.mode = {1, 1, 3, 5};
    EXPECT_THROW(w.validate(), ConfigError);
    w.mode = {1, 8, 3, 5};
    EXPECT_THROW(w.validate(), ConfigError);
}

TEST(SourceModel, RejectsBadParameters) {
    auto p = reference_params();
    p.p_ab = 0.0;
    EXPECT_THROW(SourceModel{p}, ConfigError);
    p = reference_params();
    p.max_photons = 5;
    EXPECT_THROW(SourceModel{p}, ConfigError);
}
