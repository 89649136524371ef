#include "suplaw/config.hpp"
#include "suplaw/oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace suplaw;

namespace {

double naive_permanent(const RealMatrix &m) {
    std::vector<int> idx(m.rows());
    std::iota(idx.begin(), idx.end(), 0);
    double s = 0.0;
    do {
        double p = 1.0;
        for (int i = 0; i < m.rows(); ++i) {
            p *= m(i, idx[i]);
        }
        s += p;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return s;
}

PairProductState single_pair(bool distinguishable) {
    auto s = build_separable_jsa(FrequencyGrid::uniform(-5.0, 5.0, 7), 0.0, 2.0);
    PairProductState st;
    st.modes = 2;
    st.pairs.push_back(PhotonPair{s, 1, 2, 0, distinguishable ? 1 : 0});
    return st;
}

}  // namespace

TEST(Oracle, HongOuMandel) {
    ComplexMatrix bs = jx_unitary(2);
    ModeOccupation r({1, 1});
    EXPECT_LT(oracle::transition_probability_full(single_pair(false), bs, r, r), 1e-15);
    EXPECT_NEAR(oracle::transition_probability_full(single_pair(true), bs, r, r), 0.5, 1e-15);
}

TEST(Oracle, MatchesFastPathOnScenariosAndRandomCases) {
    auto cfg = preset("paper-reference").build();
    oracle::ValidationOptions opt;
    opt.random_cases = 100;
    auto rep = oracle::run_validation(cfg, opt);
    EXPECT_LT(rep.max_abs_diff, 1e-10) << rep.worst_case;
    EXPECT_LT(rep.max_overlap_diff, 1e-10);
    EXPECT_GT(rep.cases_checked, 4 * 3 * 210);
}

TEST(DenseOverlap, DiagonalIsOne) {
    std::mt19937_64 rng(4);
    auto g = FrequencyGrid::uniform(-1.0, 1.0, 5);
    PairProductState st;
    st.modes = 4;
    st.pairs.push_back(PhotonPair{oracle::random_jsa(g, rng), 1, 2, 0, 0});
    st.pairs.push_back(PhotonPair{oracle::random_jsa(g, rng), 3, 4, 0, 0});
    auto t = right_transversal(st.occupation());
    for (const auto &mu : t.representatives) {
        EXPECT_NEAR(std::abs(oracle::dense_overlap(st, st.occupation(), mu, mu) - 1.0), 0.0, 1e-12);
    }
}

TEST(DenseOverlap, MatchesCycleContraction) {
    std::mt19937_64 rng(8);
    auto g = FrequencyGrid::uniform(-1.0, 1.0, 5);
    PairProductState st;
    st.modes = 3;
    st.pairs.push_back(PhotonPair{oracle::random_jsa(g, rng), 1, 2, 0, 0});
    st.pairs.push_back(PhotonPair{oracle::random_jsa(g, rng), 2, 3, 0, 0});
    ModeOccupation r = st.occupation();
    auto t = right_transversal(r);
    for (const auto &mu : t.representatives) {
        for (const auto &nu : t.representatives) {
            EXPECT_LT(std::abs(oracle::dense_overlap(st, r, mu, nu) - internal_overlap(st, r, mu, nu)), 1e-10);
        }
    }
}

TEST(DenseOverlap, OrthogonalSpectraCrossExchangeVanishes) {
    auto g = FrequencyGrid::uniform(-1.0, 1.0, 5);
    ComplexMatrix low = ComplexMatrix::Zero(5, 5), high = ComplexMatrix::Zero(5, 5);
    low(0, 1) = low(1, 0) = 1.0;
    high(3, 4) = high(4, 3) = 1.0;
    PairProductState st;
    st.modes = 4;
    st.pairs.push_back(PhotonPair{SpectralAmplitude::from_grid_matrix(g, low), 1, 2, 0, 0});
    st.pairs.push_back(PhotonPair{SpectralAmplitude::from_grid_matrix(g, high), 3, 4, 0, 0});
    // Swap a photon of pair 0 (label 0) with a photon of pair 1 (label 2).
    Permutation mu({2, 1, 0, 3});
    Permutation id = Permutation::identity(4);
    EXPECT_LT(std::abs(oracle::dense_overlap(st, st.occupation(), mu, id)), 1e-15);
    EXPECT_NEAR(std::abs(oracle::dense_overlap(st, st.occupation(), id, id)), 1.0, 1e-14);
}

TEST(DenseOverlap, GridCap) {
    auto g = FrequencyGrid::uniform(-1.0, 1.0, 60);
    auto s = build_separable_jsa(g, 0.0, 1.0);
    PairProductState st;
    st.modes = 4;
    st.pairs.push_back(PhotonPair{s, 1, 2, 0, 0});
    st.pairs.push_back(PhotonPair{s, 3, 4, 0, 0});
    auto id = Permutation::identity(4);
    EXPECT_THROW(oracle::dense_overlap(st, st.occupation(), id, id), ResourceError);
}

TEST(ClassicalPermanent, Examples) {
    RealMatrix id = RealMatrix::Identity(3, 3);
    ModeOccupation r({1, 1, 1});
    EXPECT_NEAR(oracle::classical_permanent(id, r, r), 1.0, 1e-15);
    RealMatrix bs = jx_unitary(2).cwiseAbs2();
    EXPECT_NEAR(oracle::classical_permanent(bs, ModeOccupation({1, 1}), ModeOccupation({1, 1})), 0.5, 1e-15);
    EXPECT_NEAR(oracle::classical_permanent(bs, ModeOccupation({2, 0}), ModeOccupation({2, 0})), 0.25, 1e-15);
}

TEST(ClassicalPermanent, RyserMatchesNaive) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int n = 1; n <= 7; ++n) {
        RealMatrix m(n, n);
        for (Eigen::Index i = 0; i < m.size(); ++i) {
            m(i) = uni(rng);
        }
        EXPECT_NEAR(oracle::ryser_permanent(m), naive_permanent(m), 1e-12 * naive_permanent(m));
    }
}

TEST(ClassicalLimit, DiagonalRhoEqualsPermanent) {
    ComplexMatrix u = jx_unitary(7);
    RealMatrix usq = u.cwiseAbs2();
    for (const auto &rvec : std::vector<std::vector<int>>{{1, 0, 1, 0, 1, 0, 1}, {2, 0, 0, 0, 0, 0, 2},
                                                          {2, 0, 1, 0, 1, 0, 2}}) {
        ModeOccupation r(rvec);
        Transversal t = right_transversal(r);
        ExternalDensityMatrix rho{t, ComplexMatrix::Identity(t.size(), t.size()) / static_cast<double>(t.size())};
        for_each_occupation(7, r.total(), [&](const std::vector<int> &c) {
            ModeOccupation s(c);
            EXPECT_NEAR(transition_probability(rho, u, r, s), oracle::classical_permanent(usq, r, s), 1e-12);
        });
    }
}
