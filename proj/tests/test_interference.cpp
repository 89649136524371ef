#include "suplaw/config.hpp"
#include "suplaw/oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace suplaw;

namespace {

ExternalDensityMatrix hom_rho(bool distinguishable) {
    auto g = FrequencyGrid::uniform(-5.0, 5.0, 9);
    auto s = build_separable_jsa(g, 0.0, 2.0);
    PairProductState st;
    st.modes = 2;
    st.pairs.push_back(PhotonPair{s, 1, 2, 0, distinguishable ? 1 : 0});
    return external_density_matrix(st);
}

ExperimentConfig ideal_four_photon(Scenario sc) {
    ExperimentFile f = preset("ideal");
    f.scenario = sc;
    return f.build();
}

double max_suppressed(const OutputDistribution &d) {
    double worst = 0.0;
    for (const auto &[p, v] : d.contributions) {
        if (is_suppressed(p.occupation(d.modes))) {
            worst = std::max(worst, d.total(p));
        }
    }
    return worst;
}

}  // namespace

TEST(TransitionProbability, HongOuMandel) {
    ComplexMatrix bs = jx_unitary(2);
    ModeOccupation r({1, 1});
    EXPECT_LT(transition_probability(hom_rho(false), bs, r, r), 1e-15);
    EXPECT_NEAR(transition_probability(hom_rho(true), bs, r, r), 0.5, 1e-15);
    EXPECT_NEAR(transition_probability(hom_rho(false), bs, r, ModeOccupation({2, 0})), 0.5, 1e-15);
    EXPECT_THROW(transition_probability(hom_rho(false), bs, r, ModeOccupation({1, 0})), std::invalid_argument);
}

TEST(TransitionProbability, SuppressedJxEvent) {
    ExperimentConfig cfg = ideal_four_photon(Scenario::mutually_indistinguishable);
    auto st = build_pair_state(cfg, 1, 1, cfg.delays);
    auto rho = external_density_matrix(st);
    EXPECT_LT(transition_probability(rho, cfg.network, st.occupation(), ModeOccupation({1, 1, 1, 0, 1, 0, 0})),
              1e-12);
}

TEST(TransitionProbability, InvariantUnderPairRelabeling) {
    ExperimentConfig cfg = ideal_four_photon(Scenario::intra_cycle);
    auto st = build_pair_state(cfg, 1, 1, cfg.delays);
    auto swapped = st;
    std::swap(swapped.pairs[0], swapped.pairs[1]);
    auto rho_a = external_density_matrix(st);
    auto rho_b = external_density_matrix(swapped);
    for_each_occupation(7, 4, [&](const std::vector<int> &c) {
        ModeOccupation s(c);
        EXPECT_NEAR(transition_probability(rho_a, cfg.network, st.occupation(), s),
                    transition_probability(rho_b, cfg.network, st.occupation(), s), 1e-14);
    });
}

TEST(Suppression, Predicate) {
    EXPECT_TRUE(is_suppressed(ModeOccupation({1, 1, 1, 0, 1, 0, 0})));
    EXPECT_FALSE(is_suppressed(ModeOccupation({1, 1, 0, 1, 1, 0, 0})));
    EXPECT_TRUE(is_suppressed(ModeOccupation({0, 1, 0, 1, 0, 1, 1})));
    EXPECT_THROW(is_suppressed(ModeOccupation({1, 1})), std::invalid_argument);
}

TEST(Suppression, Counts) {
    EXPECT_EQ(count_suppressed_patterns(7, 4), std::make_pair(16, 35));
    EXPECT_EQ(count_suppressed_patterns(7, 2), std::make_pair(12, 21));
    EXPECT_EQ(count_suppressed_patterns(3, 3), std::make_pair(1, 1));
    EXPECT_EQ(count_suppressed_patterns(3, 1), std::make_pair(1, 3));
    EXPECT_THROW(count_suppressed_patterns(3, 4), std::invalid_argument);
}

TEST(Occupations, StarsAndBarsCount) {
    for (int m = 1; m <= 6; ++m) {
        for (int n = 0; n <= 5; ++n) {
            std::size_t count = 0;
            for_each_occupation(m, n, [&](const std::vector<int> &c) {
                EXPECT_EQ(std::accumulate(c.begin(), c.end(), 0), n);
                ++count;
            });
            EXPECT_EQ(count, binomial(n + m - 1, n));
        }
    }
}

TEST(Timing, ScenarioSlots) {
    auto slots = [](Scenario s) { return channel_timing(scenario_delays(s, 5.0), 5.0).slot; };
    EXPECT_EQ(slots(Scenario::mutually_indistinguishable), (std::array<int, 4>{0, 0, 0, 0}));
    EXPECT_EQ(slots(Scenario::inter_cycle), (std::array<int, 4>{0, 0, 1, 1}));
    EXPECT_EQ(slots(Scenario::intra_cycle), (std::array<int, 4>{0, 1, 0, 1}));
    EXPECT_EQ(slots(Scenario::mutually_distinguishable), (std::array<int, 4>{0, 1, 2, 3}));
    auto t = channel_timing({0.0, 0.3, 9.0, 9.2}, 5.0);
    EXPECT_EQ(t.slot, (std::array<int, 4>{0, 0, 1, 1}));
    EXPECT_NEAR(t.residual[1], 0.3, 1e-15);
    EXPECT_NEAR(t.residual[3], 0.2, 1e-12);
    EXPECT_THROW(parse_scenario("sideways"), ConfigError);
}

TEST(Simulate, SymmetricScenariosSuppress) {
    for (Scenario sc : {Scenario::mutually_indistinguishable, Scenario::inter_cycle}) {
        auto d = simulate_experiment(ideal_four_photon(sc));
        EXPECT_LT(max_suppressed(d), 1e-10) << scenario_name(sc);
        EXPECT_LT(degree_of_violation(d), 1e-9);
    }
    for (Scenario sc : {Scenario::intra_cycle, Scenario::mutually_distinguishable}) {
        auto d = simulate_experiment(ideal_four_photon(sc));
        EXPECT_GT(max_suppressed(d), 1e-3) << scenario_name(sc);
    }
}

TEST(Simulate, DistributionBookkeeping) {
    std::vector<InputStateRecord> recs;
    auto cfg = preset("paper-reference").build();
    auto d = simulate_patterns(cfg, 4, 4, &recs);
    EXPECT_EQ(recs.size(), 7u);
    EXPECT_EQ(d.labels, (std::vector<std::string>{"R1", "R2", "R3", "background"}));
    EXPECT_EQ(d.contributions.size(), 35u);
    EXPECT_NEAR(d.grand_total(), 1.0, 1e-12);
    EXPECT_LT(d.max_norm_defect, 1e-9);
    for (const auto &[p, v] : d.contributions) {
        double sum = 0.0;
        for (double x : v) {
            EXPECT_GE(x, 0.0);
            sum += x;
        }
        EXPECT_NEAR(sum, d.total(p), 1e-12);
    }
    double bg = d.fraction("background");
    EXPECT_GE(bg, 0.25);
    EXPECT_LE(bg, 0.45);
    double dv = degree_of_violation(d);
    EXPECT_GE(dv, 0.0);
    EXPECT_LE(dv, 1.0);
}

TEST(Simulate, OutputEfficiencyWeightsFiredModes) {
    auto cfg = ideal_four_photon(Scenario::mutually_distinguishable);
    auto base = simulate_experiment(cfg);
    cfg.output_efficiency = {0.5, 1, 1, 1, 1, 1, 1};
    auto weighted = simulate_experiment(cfg);
    // Patterns containing mode 1 lose half their weight before renormalization.
    double with1 = 0.0, without1 = 0.0;
    for (const auto &[p, v] : base.contributions) {
        (p.fired.front() == 1 ? with1 : without1) += base.total(p);
    }
    const double norm = 0.5 * with1 + without1;
    for (const auto &[p, v] : base.contributions) {
        double expect = base.total(p) * (p.fired.front() == 1 ? 0.5 : 1.0) / norm;
        EXPECT_NEAR(weighted.total(p), expect, 1e-14);
    }
}

TEST(Simulate, DeterministicAcrossThreadCounts) {
    auto cfg = preset("paper-reference").build(1);
    auto a = simulate_experiment(cfg);
    cfg.threads = 3;
    auto b = simulate_experiment(cfg);
    for (const auto &[p, v] : a.contributions) {
        EXPECT_EQ(v, b.contributions.at(p));
    }
}

TEST(Simulate, SuppressionLawProperty) {
    // Mirror-symmetric rho_E on a mirror-symmetric network forbids every
    // suppressed occupation.
    std::mt19937_64 rng(99);
    auto g = FrequencyGrid::uniform(-1.0, 1.0, 5);
    Permutation mirror = mirror_permutation(7);
    ComplexMatrix u = jx_unitary(7);
    ASSERT_LT(check_mirror_phase_symmetry(u), 1e-10);
    int symmetric_cases = 0;
    for (int trial = 0; trial < 40; ++trial) {
        PairProductState st;
        st.modes = 7;
        std::uniform_int_distribution<int> mode(1, 7), slot(0, 1);
        int pairs = 1 + trial % 2;
        for (int p = 0; p < pairs; ++p) {
            std::normal_distribution<double> n;
            ComplexMatrix m(5, 5);
            for (Eigen::Index i = 0; i < m.size(); ++i) {
                m(i) = Complex(n(rng), n(rng));
            }
            // Mostly exchange-symmetric pairs across one mirror cycle in a
            // common time slot; every fourth trial is unconstrained.
            const bool free = trial % 4 == 3;
            if (!free) {
                m = (m + m.transpose()).eval();
            }
            int a = mode(rng);
            int b = free ? mode(rng) : 8 - a;
            int sa = slot(rng);
            int sb = free ? slot(rng) : sa;
            st.pairs.push_back(PhotonPair{SpectralAmplitude::from_grid_matrix(g, m), a, b, sa, sb});
        }
        auto rho = external_density_matrix(st);
        double asym = 0.0;
        try {
            asym = check_symmetry(rho, mirror);
        } catch (const std::invalid_argument &) {
            continue;
        }
        if (asym > 1e-10) {
            continue;
        }
        ++symmetric_cases;
        for_each_occupation(7, st.photons(), [&](const std::vector<int> &c) {
            ModeOccupation s(c);
            if (is_suppressed(s)) {
                EXPECT_LT(transition_probability(rho, u, st.occupation(), s), 1e-9) << s.str();
            }
        });
    }
    EXPECT_GT(symmetric_cases, 10);
}

TEST(Violation, CountsAndFidelity) {
    std::map<DetectorPattern, double> counts{{DetectorPattern{{1, 2, 3, 5}}, 30.0},
                                             {DetectorPattern{{1, 2, 3, 4}}, 70.0}};
    EXPECT_NEAR(degree_of_violation(counts, 7), 0.3, 1e-15);
    EXPECT_THROW(degree_of_violation(std::map<DetectorPattern, double>{}, 7), std::invalid_argument);

    auto a = simulate_experiment(ideal_four_photon(Scenario::mutually_indistinguishable));
    auto b = simulate_experiment(ideal_four_photon(Scenario::intra_cycle));
    EXPECT_NEAR(distribution_fidelity(a, a), 1.0, 1e-12);
    EXPECT_NEAR(distribution_fidelity(a, b), distribution_fidelity(b, a), 1e-14);
    EXPECT_LT(distribution_fidelity(a, b), 1.0);

    OutputDistribution p, q;
    p.modes = q.modes = 7;
    p.labels = q.labels = {"x"};
    p.contributions[DetectorPattern{{1, 2}}] = {1.0};
    q.contributions[DetectorPattern{{3, 4}}] = {1.0};
    EXPECT_EQ(distribution_fidelity(p, q), 0.0);
}

TEST(HomScan, BeamsplitterDip) {
    ExperimentFile f = preset("beamsplitter");
    f.jsa_model = "separable";
    f.grid_points = 65;
    auto cfg = f.build();
    auto scan = hom_scan(cfg, Channel::b, {-3.0, 0.0, 3.0}, DetectorPattern{{1, 2}});
    EXPECT_LT(scan.points[1].second, 1e-12);
    EXPECT_NEAR(scan.points[0].second, 0.5, 1e-6);
    EXPECT_NEAR(scan.distinguishable, 0.5, 1e-12);
}

TEST(HomScan, DipDepthMatchesExchangeVisibility) {
    ExperimentFile f = preset("beamsplitter");
    f.grid_points = 65;
    auto cfg = f.build();
    auto scan = hom_scan(cfg, Channel::b, {0.0}, DetectorPattern{{1, 2}});
    double vis = (scan.distinguishable - scan.points[0].second) / scan.distinguishable;
    EXPECT_NEAR(vis, pair_exchange_visibility(cfg.source.jsa_ab), 1e-12);
}

TEST(HomScan, JxInputsThreeAndFive) {
    ExperimentFile f = preset("ideal");
    f.grid_points = 65;
    auto cfg = f.build();
    auto scan = hom_scan(cfg, Channel::c, {0.0}, DetectorPattern{{1, 4}});
    EXPECT_LT(scan.points[0].second, 1e-12);
    EXPECT_GT(scan.distinguishable, 0.05);
}

TEST(Twofold, IdealSuppressionAndLabels) {
    ExperimentFile f = preset("ideal");
    auto d = twofold_distribution(f.build());
    EXPECT_EQ(d.labels, (std::vector<std::string>{"R5", "R4", "background"}));
    EXPECT_EQ(d.contributions.size(), 21u);
    // Bunched four-photon events also fire two detectors and are not bound by
    // the two-photon law, so only the pair contributions are checked.
    for (const auto &[p, v] : d.contributions) {
        if (is_suppressed(p.occupation(7))) {
            EXPECT_LT(v[0], 1e-10) << p.str();
            EXPECT_LT(v[1], 1e-10) << p.str();
            EXPECT_GT(v[2], 0.0) << p.str();
        }
    }
}

TEST(Twofold, PureTheoryMatchesOracle) {
    ExperimentFile f = preset("ideal");
    f.max_photons = 2;
    auto cfg = f.build();
    auto d = twofold_distribution(cfg);
    EXPECT_EQ(d.labels, (std::vector<std::string>{"R5", "R4"}));
    SourceModel model(cfg.source);
    std::map<DetectorPattern, double> expect;
    double total = 0.0;
    for (auto [p, q] : {std::pair{1, 0}, std::pair{0, 1}}) {
        auto st = build_pair_state(cfg, p, q, cfg.delays);
        for (const auto &pat : collision_free_patterns(7, 2)) {
            double v = model.generation_probability(p, q) *
                       oracle::transition_probability_full(st, cfg.network, st.occupation(), pat.occupation(7));
            expect[pat] += v;
            total += v;
        }
    }
    for (const auto &[pat, v] : expect) {
        EXPECT_NEAR(d.total(pat), v / total, 1e-12);
    }
}

TEST(ExperimentConfig, Validation) {
    auto cfg = preset("paper-reference").build();
    auto bad = cfg;
    bad.loss.eta.pop_back();
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = cfg;
    bad.output_efficiency = {1, 1};
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = cfg;
    bad.distinguishable_delay = 0.0;
    EXPECT_THROW(bad.validate(), ConfigError);
}
