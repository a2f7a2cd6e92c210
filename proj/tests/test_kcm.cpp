#include <gtest/gtest.h>

#include "ukcm/kcm.hpp"
#include "util.hpp"

using namespace ukcm;

TEST(SampleEquilibrium, DegenerateDensities) {
    auto region = Parallelogram::box(0, 0, 7, 7);
    auto all_h = sample_equilibrium(region, 0.0, 42);
    EXPECT_EQ(all_h.infected_count(), 0);
    auto all_i = sample_equilibrium(region, 1.0, 42);
    EXPECT_EQ(all_i.infected_count(), all_i.site_count());
}

TEST(SampleEquilibrium, FrequencyBand) {
    auto region = Parallelogram::box(0, 0, 15, 15);
    const double q = 0.3;
    const int reps = 4000;
    std::vector<int> counts((std::size_t)region.integer_bbox().width() *
                                (std::size_t)region.integer_bbox().height(),
                            0);
    for (int r = 0; r < reps; ++r) {
        auto c = sample_equilibrium(region, q, 99, (std::uint64_t)r);
        std::size_t i = 0;
        for (const Vec& p : c.sites()) counts[i++] += c.infected(p) ? 1 : 0;
    }
    double sigma = std::sqrt(q * (1 - q) * reps);
    for (int cnt : counts)
        EXPECT_LT(std::fabs(cnt - q * reps), 5 * sigma);
}

TEST(Simulate, OriginInitiallyInfectedGivesZeroTau) {
    SimParams p;
    p.family = testutil::load_family('g');
    p.q = 0.3;
    p.region = Parallelogram::box(-4, -4, 4, 4);
    p.stop = StopRule::OriginInfected;
    auto init = Configuration::from_infections(p.region, {{0, 0}});
    auto tr = simulate(p, init, stream(1, 1));
    EXPECT_EQ(tr.tau0, 0.0);
    EXPECT_FALSE(tr.tau0_censored);
}

TEST(Simulate, NoInfectionsNoDynamics) {
    SimParams p;
    p.family = testutil::load_family('g');
    p.q = 0.3;
    p.region = Parallelogram::box(-4, -4, 4, 4);
    p.max_time = 50;
    auto init = Configuration::all_healthy(p.region);
    auto tr = simulate(p, init, stream(2, 0));
    EXPECT_EQ(tr.applied, 0);
    EXPECT_TRUE(tr.tau0_censored);
    EXPECT_EQ(tr.tau0, 50.0);
    EXPECT_EQ(tr.rings, 0);  // rejection-free path: no site is ever active
}

TEST(Simulate, BootstrapDomination) {
    // the zero set can never leave the closure of the initial zero set
    SimParams p;
    p.family = testutil::load_family('g');
    p.q = 0.25;
    p.region = Parallelogram::box(-8, -8, 7, 7);
    p.max_time = 40;
    for (std::uint64_t trial = 0; trial < 5; ++trial) {
        SplitMix64 init_rng = stream(7, 2 * trial);
        auto init = sample_equilibrium(p.region, p.q, init_rng);
        auto closed = closure(init, p.family);
        bool violated = false;
        RingObserver obs = [&](double, Vec site, bool applied, int newv) {
            if (applied && newv == 0 && !closed.infected(site)) violated = true;
            return false;
        };
        simulate(p, init, stream(7, 2 * trial + 1), &obs);
        EXPECT_FALSE(violated);
    }
}

TEST(Simulate, DeterminismBitIdentical) {
    SimParams p;
    p.family = testutil::load_family('e');
    p.q = 0.2;
    p.region = Parallelogram::box(-6, -6, 6, 6);
    p.max_time = 30;
    p.record_events = true;
    SplitMix64 r1 = stream(123, 5), r2 = stream(123, 5);
    auto init = sample_equilibrium(p.region, p.q, 55);
    auto t1 = simulate(p, init, r1);
    auto t2 = simulate(p, init, r2);
    EXPECT_EQ(t1.rings, t2.rings);
    ASSERT_EQ(t1.events.size(), t2.events.size());
    for (std::size_t i = 0; i < t1.events.size(); ++i) {
        EXPECT_EQ(t1.events[i].time, t2.events[i].time);
        EXPECT_EQ(t1.events[i].site, t2.events[i].site);
        EXPECT_EQ(t1.events[i].new_value, t2.events[i].new_value);
    }
    EXPECT_TRUE(t1.final_state == t2.final_state);
}

TEST(Simulate, EventLogTimesStrictlyIncreasing) {
    SimParams p;
    p.family = testutil::load_family('g');
    p.q = 0.4;
    p.region = Parallelogram::box(-5, -5, 5, 5);
    p.max_time = 20;
    p.record_events = true;
    auto init = sample_equilibrium(p.region, p.q, 9);
    auto tr = simulate(p, init, stream(9, 1));
    for (std::size_t i = 1; i < tr.events.size(); ++i)
        EXPECT_LT(tr.events[i - 1].time, tr.events[i].time);
}

TEST(Simulate, StationarityAfterRings) {
    // starting at equilibrium, the configuration after the j-th ring is still
    // product Bernoulli: per-site 5-sigma band plus aggregate chi-square
    SimParams p;
    p.family = testutil::load_family('g');
    p.q = 0.3;
    p.region = Parallelogram::box(0, 0, 7, 7);
    p.max_time = 1e9;
    const int reps = 4000, rings_target = 20;
    const std::size_t nsites = 64;
    std::vector<int> counts(nsites, 0);
    double pair_sum = 0;
    for (int r = 0; r < reps; ++r) {
        SplitMix64 init_rng = stream(31, 2 * (std::uint64_t)r);
        auto init = sample_equilibrium(p.region, p.q, init_rng);
        int rings = 0;
        RingObserver obs = [&](double, Vec, bool, int) { return ++rings >= rings_target; };
        auto tr = simulate(p, init, stream(31, 2 * (std::uint64_t)r + 1), &obs);
        std::size_t i = 0;
        for (const Vec& s : tr.final_state.sites())
            counts[i++] += tr.final_state.infected(s) ? 1 : 0;
        pair_sum += (tr.final_state.infected({3, 3}) && tr.final_state.infected({4, 3}))
                        ? 1
                        : 0;
    }
    double sigma = std::sqrt(p.q * (1 - p.q) * reps);
    double chi2 = 0;
    for (int cnt : counts) {
        EXPECT_LT(std::fabs(cnt - p.q * reps), 5 * sigma);
        chi2 += (cnt - p.q * reps) * (cnt - p.q * reps) / (p.q * (1 - p.q) * reps);
    }
    EXPECT_GT(chi_square_sf(chi2, (double)nsites), 1e-3);
    // nearest-neighbour pair frequency ~ q^2
    double pq = pair_sum / reps, want = p.q * p.q;
    EXPECT_LT(std::fabs(pq - want), 5 * std::sqrt(want * (1 - want) / reps));
}

TEST(EstimateTau0, FullDensityIsInstant) {
    SimParams p;
    p.family = testutil::load_family('g');
    p.q = 0.999999;  // effectively one: origin infected at time zero a.s.
    p.region = Parallelogram::box(-4, -4, 4, 4);
    p.max_time = 100;
    p.trial_count = 50;
    p.seed = 77;
    auto est = estimate_tau0(p);
    EXPECT_EQ(est.censor_fraction, 0.0);
    EXPECT_LT(est.mean, 1.0);
    EXPECT_GT(est.zero_fraction, 0.9);
    EXPECT_TRUE(est.usable);
}

TEST(EstimateTau0, AllCensoredFlagged) {
    SimParams p;
    p.family = testutil::load_family('g');
    p.q = 0.0001;
    p.region = Parallelogram::box(-3, -3, 3, 3);
    p.max_time = 0.001;
    p.trial_count = 10;
    p.seed = 5;
    auto est = estimate_tau0(p);
    // nearly every trial censors; usable only if some origin site was
    // initially infected, which at this q is overwhelmingly unlikely
    EXPECT_FALSE(est.usable);
    EXPECT_EQ(est.censor_fraction, 1.0);
}

TEST(EstimateTau0, WorkerCountInvariance) {
    SimParams p;
    p.family = testutil::load_family('g');
    p.q = 0.35;
    p.region = Parallelogram::box(-6, -6, 6, 6);
    p.max_time = 500;
    p.trial_count = 24;
    p.seed = 2026;
    p.workers = 1;
    auto a = estimate_tau0(p);
    p.workers = 2;
    auto b = estimate_tau0(p);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        EXPECT_EQ(a.samples[i], b.samples[i]);
    EXPECT_EQ(a.mean, b.mean);
}

TEST(Simulate, CensoredWhenOriginUnreachableByBootstrap) {
    // the origin is never in the closure of the initial zero set, so tau0
    // must censor at the horizon
    SimParams p;
    p.family = testutil::load_family('g');
    p.q = 0.3;
    p.region = Parallelogram::box(-6, -6, 6, 6);
    p.max_time = 25;
    auto init = Configuration::from_infections(p.region, {{5, 5}, {5, 6}});
    auto closed = closure(init, p.family);
    ASSERT_FALSE(closed.infected({0, 0}));
    auto tr = simulate(p, init, stream(77, 3));
    EXPECT_TRUE(tr.tau0_censored);
    EXPECT_EQ(tr.tau0, 25.0);
}
