#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ukcm/closure.hpp"
#include "ukcm/rng.hpp"
#include "util.hpp"

using namespace ukcm;

namespace {
Configuration random_config(const Parallelogram& region, double q, SplitMix64& rng,
                            Boundary b = Boundary::all_healthy()) {
    Configuration c(region, std::move(b));
    for (const Vec& p : c.sites())
        if (rng.bernoulli(q)) c.infect(p);
    return c;
}
}  // namespace

TEST(Closure, EmptyStaysEmpty) {
    auto fam = testutil::load_family('g');
    auto c = Configuration::all_healthy(Parallelogram::box(0, 0, 9, 9));
    auto cl = closure(c, fam);
    EXPECT_EQ(cl.infected_count(), 0);
}

TEST(Closure, IsotropicCornerFill) {
    auto fam = testutil::load_family('g');
    auto c = Configuration::from_infections(Parallelogram::box(0, 0, 3, 3),
                                            {{0, 0}, {1, 1}});
    auto cl = closure(c, fam);
    EXPECT_TRUE(cl.infected({0, 1}));
    EXPECT_TRUE(cl.infected({1, 0}));
    EXPECT_EQ(cl.infected_count(), 4);
    // input unchanged
    EXPECT_EQ(c.infected_count(), 2);
}

TEST(Closure, FullyInfectedUnchanged) {
    auto fam = testutil::load_family('e');
    auto c = Configuration::all_healthy(Parallelogram::box(0, 0, 4, 4));
    for (const Vec& p : c.sites()) c.infect(p);
    auto cl = closure(c, fam);
    EXPECT_TRUE(cl == c);
}

TEST(Closure, MatchesNaiveOracleOnRandomInstances) {
    SplitMix64 rng(2024);
    for (char fc : {'g', 'e', 'a'}) {
        auto fam = testutil::load_family(fc);
        for (int t = 0; t < 60; ++t) {
            auto c = random_config(Parallelogram::box(0, 0, 14, 14), 0.3, rng);
            EXPECT_TRUE(closure(c, fam) == testutil::naive_closure(c, fam))
                << "family " << fc << " trial " << t;
        }
    }
}

TEST(Closure, HalfPlaneBoundaryMatchesNaive) {
    SplitMix64 rng(77);
    auto fam = testutil::load_family('g');
    Boundary hp = Boundary::infected_half_plane(HalfPlane{Direction(1, 0), Rat(0), false});
    for (int t = 0; t < 40; ++t) {
        auto c = random_config(Parallelogram::box(0, -6, 12, 6), 0.15, rng, hp);
        EXPECT_TRUE(closure(c, fam) == testutil::naive_closure(c, fam)) << t;
    }
}

TEST(Closure, FrozenBoundaryMatchesNaive) {
    SplitMix64 rng(78);
    auto fam = testutil::load_family('e');
    Boundary fz = Boundary::frozen_set({{-1, 0}, {-1, 1}, {-2, 0}, {5, -1}, {6, -1}});
    for (int t = 0; t < 40; ++t) {
        auto c = random_config(Parallelogram::box(0, 0, 9, 9), 0.2, rng, fz);
        EXPECT_TRUE(closure(c, fam) == testutil::naive_closure(c, fam)) << t;
    }
}

TEST(Closure, Laws) {
    SplitMix64 rng(5);
    auto fam = testutil::load_family('g');
    for (int t = 0; t < 50; ++t) {
        auto region = Parallelogram::box(0, 0, 11, 11);
        auto c = random_config(region, 0.25, rng);
        auto cl = closure(c, fam);
        // containment
        for (const Vec& p : c.infected_sites()) EXPECT_TRUE(cl.infected(p));
        // idempotence
        EXPECT_TRUE(closure(cl, fam) == cl);
        // monotonicity: add one infection
        auto c2 = c;
        Vec extra = c.sites()[rng.below((std::uint64_t)c.site_count())];
        c2.infect(extra);
        auto cl2 = closure(c2, fam);
        for (const Vec& p : cl.infected_sites()) EXPECT_TRUE(cl2.infected(p));
    }
}

TEST(Closure, TranslationCovariance) {
    SplitMix64 rng(6);
    auto fam = testutil::load_family('e');
    for (int t = 0; t < 30; ++t) {
        // compact seed set well inside a large region; all four axis
        // directions are stable so the closure stays inside the seed bbox
        std::vector<Vec> seeds;
        for (int i = 0; i < 10; ++i)
            seeds.push_back({(std::int64_t)(rng.next() % 6) + 9,
                             (std::int64_t)(rng.next() % 6) + 9});
        Vec tvec{(std::int64_t)(rng.next() % 3) - 1, (std::int64_t)(rng.next() % 3) - 1};
        auto region = Parallelogram::box(0, 0, 23, 23);
        auto c = Configuration::from_infections(region, seeds);
        std::vector<Vec> shifted;
        for (const Vec& s : seeds) shifted.push_back(s + tvec);
        auto ct = Configuration::from_infections(region, shifted);
        auto cl = closure(c, fam).infected_sites();
        auto clt = closure(ct, fam).infected_sites();
        std::vector<Vec> cl_shift;
        for (const Vec& p : cl) cl_shift.push_back(p + tvec);
        std::sort(cl_shift.begin(), cl_shift.end());
        std::sort(clt.begin(), clt.end());
        EXPECT_EQ(cl_shift, clt);
    }
}

TEST(LocallyInfectable, SpotCases) {
    auto fam = testutil::load_family('g');
    AxisPair axes;
    Rat K(3);
    auto c = Configuration::all_healthy(Parallelogram::box(-8, -8, 8, 8));
    EXPECT_FALSE(is_locally_infectable(c, fam, axes, K, {0, 0}));
    c.infect({0, 0});
    EXPECT_TRUE(is_locally_infectable(c, fam, axes, K, {0, 0}));
    // a cross pattern around the origin infects it locally
    auto c2 = Configuration::from_infections(Parallelogram::box(-8, -8, 8, 8),
                                             {{-1, 0}, {0, 1}});
    EXPECT_TRUE(is_locally_infectable(c2, fam, axes, K, {0, 0}));
    // removing one designated infection flips the answer
    auto c3 = Configuration::from_infections(Parallelogram::box(-8, -8, 8, 8), {{-1, 0}});
    EXPECT_FALSE(is_locally_infectable(c3, fam, axes, K, {0, 0}));
    // infections outside the 4K window are invisible
    auto c4 = Configuration::from_infections(Parallelogram::box(-40, -40, 40, 40),
                                             {{30, 0}, {30, 1}, {31, 0}, {31, 1}});
    EXPECT_FALSE(is_locally_infectable(c4, fam, axes, Rat(3), {0, 0}));
}
