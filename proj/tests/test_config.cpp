#include <gtest/gtest.h>

#include <sstream>

#include "ukcm/config.hpp"
#include "ukcm/rng.hpp"

using namespace ukcm;

TEST(Configuration, BasicStateAndCounts) {
    auto c = Configuration::all_healthy(Parallelogram::box(0, 0, 3, 2));
    EXPECT_EQ(c.site_count(), 12);
    EXPECT_EQ(c.infected_count(), 0);
    c.infect({1, 1});
    EXPECT_TRUE(c.infected({1, 1}));
    EXPECT_EQ(c.infected_count(), 1);
    c.infect({1, 1});  // idempotent
    EXPECT_EQ(c.infected_count(), 1);
    c.heal({1, 1});
    EXPECT_EQ(c.infected_count(), 0);
    EXPECT_THROW(c.infect({9, 9}), std::invalid_argument);
}

TEST(Configuration, BoundaryConventions) {
    auto healthy = Configuration::all_healthy(Parallelogram::box(0, 0, 1, 1));
    EXPECT_FALSE(healthy.infected_ext({-5, 0}));

    auto hp = Configuration::all_healthy(
        Parallelogram::box(0, 0, 1, 1),
        Boundary::infected_half_plane(HalfPlane{Direction(1, 0), Rat(0), false}));
    EXPECT_TRUE(hp.infected_ext({-1, 7}));
    EXPECT_FALSE(hp.infected_ext({5, 0}));
    // in-region sites never read through the boundary
    EXPECT_FALSE(hp.infected_ext({0, 0}));

    auto froz = Configuration::all_healthy(Parallelogram::box(0, 0, 1, 1),
                                           Boundary::frozen_set({{4, 4}}));
    EXPECT_TRUE(froz.infected_ext({4, 4}));
    EXPECT_FALSE(froz.infected_ext({4, 5}));
}

TEST(Configuration, SkewRegion) {
    AxisPair axes{Direction(-1, 1), Direction(-1, -1)};
    Parallelogram r(axes, Rat(0), Rat(-2), Rat(4), Rat(2));
    Configuration c(r, Boundary::all_healthy());
    for (const Vec& p : c.sites()) EXPECT_TRUE(r.contains(p));
    EXPECT_GT(c.site_count(), 4);
    EXPECT_FALSE(c.in_region({100, 100}));
}

TEST(Snapshot, RoundTripBitExact) {
    SplitMix64 rng(42);
    auto c = Configuration::all_healthy(
        Parallelogram::box(-3, -2, 8, 5),
        Boundary::infected_half_plane(HalfPlane{Direction(2, 1), Rat(-7, 2), true}));
    for (const Vec& p : c.sites())
        if (rng.bernoulli(0.35)) c.infect(p);
    std::string s1 = snapshot_string(c, "demo");
    std::istringstream is(s1);
    std::string fam;
    auto c2 = read_snapshot(is, &fam);
    EXPECT_EQ(fam, "demo");
    EXPECT_TRUE(c == c2);
    EXPECT_EQ(snapshot_string(c2, "demo"), s1);
}

TEST(Snapshot, FrozenBoundaryRoundTrip) {
    auto c = Configuration::all_healthy(Parallelogram::box(0, 0, 4, 4),
                                        Boundary::frozen_set({{-1, 0}, {5, 5}}));
    c.infect({2, 2});
    std::istringstream is(snapshot_string(c));
    auto c2 = read_snapshot(is);
    EXPECT_TRUE(c == c2);
    EXPECT_TRUE(c2.infected_ext({5, 5}));
}

TEST(Snapshot, RejectsMalformed) {
    std::istringstream bad("ukcm-snapshot 2\n");
    EXPECT_THROW(read_snapshot(bad), SnapshotError);
    std::istringstream bad2("not-a-snapshot\n");
    EXPECT_THROW(read_snapshot(bad2), SnapshotError);
}
