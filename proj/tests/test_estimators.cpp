#include <gtest/gtest.h>

#include "ukcm/estimators.hpp"
#include "util.hpp"

using namespace ukcm;

namespace {
ConstantPack pack_g_small() {
    ConstantPack p;
    p.r2 = 2;
    p.c1 = Rat(2);
    p.c2p_sq = Rat(9);
    p.c2_sq = Rat(16);
    p.c3_sq = Rat(25);
    p.c4p_sq = Rat(36);
    p.c4_sq = Rat(49);
    p.c5_sq = Rat(64);
    p.c6_sq = Rat(81);
    p.K = Rat(4);
    p.allow_small_k = true;
    p.validate();
    return p;
}

// exact event probability by full enumeration over <= 20 sites
template <class EventFn>
double exact_probability(const Configuration& proto, double q, const EventFn& ev) {
    auto sites = proto.sites();
    const std::size_t n = sites.size();
    double total = 0;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        Configuration c = proto;
        int k = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ull << i)) {
                c.infect(sites[i]);
                ++k;
            }
        if (ev(c))
            total += std::pow(q, k) * std::pow(1 - q, (double)(n - (std::size_t)k));
    }
    return total;
}
}  // namespace

TEST(SpanningEstimator, DegenerateDensities) {
    auto fam = testutil::load_family('g');
    auto pack = pack_g_small();
    auto d = Parallelogram::box(0, 0, 3, 3);
    auto one = estimate_spanning_probability(d, fam, pack, 1.0, 200, 7);
    EXPECT_EQ(one.value, 1.0);
    auto zero = estimate_spanning_probability(d, fam, pack, 0.0, 200, 7);
    EXPECT_EQ(zero.value, 0.0);
}

TEST(SpanningEstimator, MatchesExactEnumerationWithin3Sigma) {
    auto fam = testutil::load_family('g');
    auto pack = pack_g_small();
    auto d = Parallelogram::box(0, 0, 3, 2);  // 12 sites
    Configuration proto(d, Boundary::all_healthy());
    for (double q : {0.2, 0.5}) {
        double exact =
            exact_probability(proto, q, [&](const Configuration& c) {
                return spans_own_box(c, fam, pack);
            });
        const std::int64_t trials = 20000;
        auto est = estimate_spanning_probability(d, fam, pack, q, trials, 99);
        double sigma = std::sqrt(exact * (1 - exact) / (double)trials);
        EXPECT_LT(std::fabs(est.value - exact), 3 * sigma + 1e-12) << "q=" << q;
    }
}

TEST(SpanningEstimator, DeterministicAcrossWorkerCounts) {
    auto fam = testutil::load_family('g');
    auto pack = pack_g_small();
    auto d = Parallelogram::box(0, 0, 4, 4);
    auto a = estimate_spanning_probability(d, fam, pack, 0.3, 4000, 123, 1);
    auto b = estimate_spanning_probability(d, fam, pack, 0.3, 4000, 123, 2);
    EXPECT_EQ(a.value, b.value);
}

TEST(CrossingEstimator, DegenerateAndExactAgreement) {
    auto fam = testutil::load_family('g');
    auto pack = pack_g_small();
    auto r = Parallelogram::box(0, 0, 5, 1);  // 12 sites
    auto zero = estimate_crossing_probability(r, r.axes().u1, fam, pack, 0.0, 500, 3,
                                              CrossingMode::Exact);
    EXPECT_EQ(zero.est.value, 0.0);
    EXPECT_FALSE(zero.under_detects);

    Configuration proto(r, Boundary::all_healthy());
    CrossingTable table(r, r.axes().u1, fam, pack);
    for (double q : {0.2, 0.5}) {
        double exact = exact_probability(
            proto, q, [&](const Configuration& c) { return table.event(c); });
        const std::int64_t trials = 20000;
        auto est = estimate_crossing_probability(r, r.axes().u1, fam, pack, q, trials,
                                                 2024, CrossingMode::Exact);
        double sigma = std::sqrt(exact * (1 - exact) / (double)trials);
        EXPECT_LT(std::fabs(est.est.value - exact), 3 * sigma + 1e-12) << "q=" << q;
    }
}

TEST(CrossingEstimator, AsIsUnderDetectsExact) {
    auto fam = testutil::load_family('g');
    auto pack = pack_g_small();
    auto r = Parallelogram::box(0, 0, 5, 1);
    const std::int64_t trials = 4000;
    auto exact = estimate_crossing_probability(r, r.axes().u1, fam, pack, 0.35, trials, 5,
                                               CrossingMode::Exact);
    auto asis = estimate_crossing_probability(r, r.axes().u1, fam, pack, 0.35, trials, 5,
                                              CrossingMode::AsIs);
    EXPECT_TRUE(asis.under_detects);
    EXPECT_LE(asis.est.value, exact.est.value + 1e-12);
}

TEST(CrossingEstimator, WidthTrend) {
    // wider strips are harder to cross: estimates non-increasing in width
    auto fam = testutil::load_family('g');
    auto pack = pack_g_small();
    const std::int64_t trials = 3000;
    double w1 = estimate_crossing_probability(Parallelogram::box(0, 0, 7, 2),
                                              AxisPair{}.u1, fam, pack, 0.25, trials, 11,
                                              CrossingMode::AsIs)
                    .est.value;
    double w2 = estimate_crossing_probability(Parallelogram::box(0, 0, 15, 2),
                                              AxisPair{}.u1, fam, pack, 0.25, trials, 11,
                                              CrossingMode::AsIs)
                    .est.value;
    EXPECT_GE(w1, w2);
}

TEST(LocalInfectableEstimator, Sane) {
    auto fam = testutil::load_family('g');
    auto pack = pack_g_small();
    auto lo = estimate_local_infectable_probability(fam, AxisPair{}, pack, 0.05, 4000, 9);
    auto hi = estimate_local_infectable_probability(fam, AxisPair{}, pack, 0.6, 4000, 9);
    EXPECT_LT(lo.value, hi.value);
    EXPECT_GE(lo.value, 0.05 * 0.9);  // at least the initially-infected rate
}
