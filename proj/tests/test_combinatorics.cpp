#include "suplaw/combinatorics.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace suplaw;

namespace {

using Cycles = std::vector<std::vector<int>>;

// All occupations of up to `max_n` photons over `modes` modes.
std::vector<ModeOccupation> small_occupations(int modes, int max_n) {
    std::vector<ModeOccupation> out;
    std::vector<int> c(modes, 0);
    while (true) {
        int total = std::accumulate(c.begin(), c.end(), 0);
        if (total >= 1 && total <= max_n) {
            out.emplace_back(c);
        }
        int k = 0;
        while (k < modes && ++c[k] > max_n) {
            c[k++] = 0;
        }
        if (k == modes) {
            break;
        }
    }
    return out;
}

}  // namespace

TEST(Permutation, RejectsNonBijection) {
    EXPECT_THROW(Permutation({0, 0, 1}), std::invalid_argument);
    EXPECT_THROW(Permutation({0, 3}), std::invalid_argument);
    EXPECT_THROW(Permutation::from_one_based({1, 3}), std::invalid_argument);
}

TEST(Permutation, ComposeAndInvert) {
    Permutation a = Permutation::from_one_based({2, 3, 1});
    Permutation b = Permutation::from_one_based({1, 3, 2});
    // (a b)(i) = a(b(i))
    EXPECT_EQ((a * b).one_based(), (std::vector<int>{2, 1, 3}));
    EXPECT_TRUE((a * a.inverse()).is_identity());
    EXPECT_TRUE((a.inverse() * a).is_identity());
}

TEST(Permutation, RankIsDenseAndLexicographic) {
    auto perms = all_permutations(5);
    ASSERT_EQ(perms.size(), 120u);
    for (std::size_t i = 0; i < perms.size(); ++i) {
        EXPECT_EQ(perms[i].rank(), i);
    }
    EXPECT_THROW(all_permutations(kMaxParticles + 1), ResourceError);
}

TEST(CycleDecomposition, MirrorSevenModes) {
    EXPECT_EQ(cycle_decomposition(mirror_permutation(7)), (Cycles{{1, 7}, {2, 6}, {3, 5}, {4}}));
}

TEST(CycleDecomposition, IdentityFiveModes) {
    EXPECT_EQ(cycle_decomposition(Permutation::identity(5)), (Cycles{{1}, {2}, {3}, {4}, {5}}));
}

TEST(CycleDecomposition, MirrorFourModes) {
    EXPECT_EQ(cycle_decomposition(mirror_permutation(4)), (Cycles{{1, 4}, {2, 3}}));
}

TEST(CycleDecomposition, PartitionsAndReproduces) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng() % 8);
        std::vector<int> img(n);
        std::iota(img.begin(), img.end(), 0);
        std::shuffle(img.begin(), img.end(), rng);
        Permutation p(img);
        auto cycles = cycle_decomposition(p);
        std::vector<int> seen;
        std::vector<int> rebuilt(n, -1);
        for (const auto &c : cycles) {
            for (std::size_t i = 0; i < c.size(); ++i) {
                seen.push_back(c[i]);
                rebuilt[c[i] - 1] = c[(i + 1) % c.size()] - 1;
            }
        }
        std::sort(seen.begin(), seen.end());
        std::vector<int> expect(n);
        std::iota(expect.begin(), expect.end(), 1);
        EXPECT_EQ(seen, expect);
        EXPECT_EQ(rebuilt, img);
    }
}

TEST(Assignment, FromOccupationExamples) {
    EXPECT_EQ(assignment_from_occupation(ModeOccupation({1, 0, 1, 0, 1, 0, 1})).modes, (std::vector<int>{1, 3, 5, 7}));
    EXPECT_EQ(assignment_from_occupation(ModeOccupation({2, 0})).modes, (std::vector<int>{1, 1}));
    EXPECT_EQ(assignment_from_occupation(ModeOccupation({2, 0, 0, 0, 0, 0, 2})).modes,
              (std::vector<int>{1, 1, 7, 7}));
}

TEST(Assignment, RoundTrip) {
    for (const auto &r : small_occupations(4, 5)) {
        auto e = assignment_from_occupation(r);
        EXPECT_TRUE(std::is_sorted(e.modes.begin(), e.modes.end()));
        EXPECT_EQ(occupation_from_assignment(e, 4), r);
        EXPECT_EQ(e.particles(), r.total());
    }
}

TEST(Occupation, RejectsNegative) { EXPECT_THROW(ModeOccupation({1, -1}), std::invalid_argument); }

TEST(YoungSubgroup, Orders) {
    EXPECT_EQ(young_subgroup_order(ModeOccupation({2, 0, 0, 0, 0, 0, 2})), 4u);
    EXPECT_EQ(young_subgroup_order(ModeOccupation({1, 0, 1, 0, 1, 0, 1})), 1u);
    EXPECT_EQ(young_subgroup_order(ModeOccupation({3, 0, 0, 0, 0, 0, 3})), 36u);
}

TEST(YoungSubgroup, ElementsFixTheAssignment) {
    ModeOccupation r({2, 1, 3});
    auto e = assignment_from_occupation(r);
    auto young = young_subgroup_elements(r);
    EXPECT_EQ(young.size(), young_subgroup_order(r));
    std::set<std::vector<int>> distinct;
    for (const auto &x : young) {
        EXPECT_EQ(permute_assignment(e, x), e.modes);
        distinct.insert(x.image());
    }
    EXPECT_EQ(distinct.size(), young.size());
}

TEST(Transversal, Sizes) {
    EXPECT_EQ(right_transversal(ModeOccupation({1, 1})).size(), 2u);
    EXPECT_EQ(right_transversal(ModeOccupation({2, 0, 0, 0, 0, 0, 2})).size(), 6u);
    EXPECT_EQ(right_transversal(ModeOccupation({3, 0, 0, 0, 0, 0, 3})).size(), 20u);
}

TEST(Transversal, DistinctOrderingsByBruteForce) {
    // Deduplicate all 4! orderings of (1,1,7,7) independently.
    std::vector<int> e{1, 1, 7, 7};
    std::set<std::vector<int>> orderings;
    std::vector<int> idx{0, 1, 2, 3};
    do {
        orderings.insert({e[idx[0]], e[idx[1]], e[idx[2]], e[idx[3]]});
    } while (std::next_permutation(idx.begin(), idx.end()));
    auto t = right_transversal(ModeOccupation({2, 0, 0, 0, 0, 0, 2}));
    EXPECT_EQ(std::set<std::vector<int>>(t.orderings.begin(), t.orderings.end()), orderings);
    EXPECT_TRUE(std::is_sorted(t.orderings.begin(), t.orderings.end()));
}

TEST(Transversal, InducedOrderingsMatchRepresentatives) {
    auto t = right_transversal(ModeOccupation({2, 1, 0, 2}));
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_EQ(permute_assignment(t.assignment, t.representatives[i]), t.orderings[i]);
        EXPECT_EQ(t.index_of(t.orderings[i]), static_cast<long>(i));
    }
    EXPECT_EQ(t.index_of({9, 9, 9, 9, 9}), -1);
}

TEST(Transversal, FactorizesSymmetricGroup) {
    for (const auto &r : small_occupations(3, 6)) {
        auto t = right_transversal(r);
        auto young = young_subgroup_elements(r);
        const int n = r.total();
        EXPECT_EQ(t.size() * young.size(), factorial(n));
        std::set<std::uint64_t> ranks;
        for (const auto &xi : young) {
            for (const auto &mu : t.representatives) {
                ranks.insert((xi * mu).rank());
            }
        }
        EXPECT_EQ(ranks.size(), factorial(n)) << r.str();
    }
}

TEST(Transversal, CapIsEnforced) {
    EXPECT_THROW(right_transversal(ModeOccupation({5, 4})), ResourceError);
    EXPECT_NO_THROW(right_transversal(ModeOccupation({5, 4}), 9));
}
