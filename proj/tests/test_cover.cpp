#include <gtest/gtest.h>

#include "ukcm/cover.hpp"
#include "ukcm/rng.hpp"
#include "util.hpp"

using namespace ukcm;

namespace {
// desk-scale pack for the isotropic family (r^2 = 2)
ConstantPack desk_pack() {
    ConstantPack p;
    p.r2 = 2;
    p.c1 = Rat(2);
    p.c2p_sq = Rat(9);        // C2' = 3
    p.c2_sq = Rat(49, 4);     // C2  = 3.5
    p.c3_sq = Rat(36);        // C3  = 6
    p.c4p_sq = Rat(49);       // C4' = 7
    p.c4_sq = Rat(64);        // C4  = 8
    p.c5_sq = Rat(81);
    p.c6_sq = Rat(100);
    p.K = Rat(12);
    p.validate();
    return p;
}
}  // namespace

TEST(Cover, EmptyInput) {
    auto fam = testutil::load_family('g');
    auto res = cover({}, fam, desk_pack(), CoverParams::axis_faces(), 1);
    EXPECT_TRUE(res.droplets.empty());
    EXPECT_TRUE(res.clusters.empty());
    EXPECT_TRUE(res.crumbs.empty());
}

TEST(Cover, AlphaOneNeverCrumbs) {
    auto fam = testutil::load_family('g');
    auto res = cover({{0, 0}, {30, 30}}, fam, desk_pack(), CoverParams::axis_faces(), 1);
    EXPECT_TRUE(res.crumbs.empty());
    EXPECT_EQ(res.clusters.size(), 2u);
    EXPECT_EQ(res.droplets.size(), 2u);
}

TEST(Cover, SingletonCrumbAtAlphaTwo) {
    // with alpha = 2 a crumb is a component generated by one infection, which
    // for this family means exactly the singleton components
    auto fam = testutil::load_family('g');
    auto res =
        cover({{0, 0}, {40, 40}, {40, 41}}, fam, desk_pack(), CoverParams::axis_faces(), 2);
    ASSERT_EQ(res.crumbs.size(), 1u);
    EXPECT_EQ(res.crumbs[0], (std::vector<Vec>{{0, 0}}));
    EXPECT_EQ(res.clusters.size(), 1u);  // the two-site component
    EXPECT_EQ(res.droplets.size(), 1u);
}

TEST(Cover, OverlappingDropletsMergeSubadditively) {
    auto fam = testutil::load_family('g');
    auto pack = desk_pack();
    auto res = cover({{0, 0}, {10, 0}}, fam, pack, CoverParams::axis_faces(), 1);
    ASSERT_EQ(res.clusters.size(), 2u);
    ASSERT_EQ(res.droplets.size(), 1u);
    ASSERT_EQ(res.merge_history.size(), 3u);
    double d1 = std::sqrt(res.merge_history[0].diameter_sq().to_double());
    double d2 = std::sqrt(res.merge_history[1].diameter_sq().to_double());
    double dm = std::sqrt(res.merge_history[2].diameter_sq().to_double());
    EXPECT_LE(dm, d1 + d2 + 1e-9);
    EXPECT_EQ(res.provenance[0], (std::vector<int>{0, 1}));
}

TEST(Cover, OutputIndependentOfMergeOrder) {
    auto fam = testutil::load_family('g');
    auto pack = desk_pack();
    SplitMix64 rng(300);
    for (int t = 0; t < 20; ++t) {
        std::vector<Vec> z;
        for (int i = 0; i < 18; ++i)
            z.push_back({(std::int64_t)(rng.next() % 60), (std::int64_t)(rng.next() % 60)});
        auto canon = cover(z, fam, pack, CoverParams::axis_faces(), 1);
        for (int k = 0; k < 6; ++k) {
            auto other = cover(z, fam, pack, CoverParams::axis_faces(), 1,
                               MergeOrder::Random, rng.next());
            ASSERT_EQ(other.droplets.size(), canon.droplets.size());
            for (std::size_t i = 0; i < canon.droplets.size(); ++i)
                EXPECT_TRUE(other.droplets[i] == canon.droplets[i]);
            EXPECT_EQ(other.provenance, canon.provenance);
        }
    }
}

TEST(Cover, OutputPairwiseDisjoint) {
    auto fam = testutil::load_family('g');
    auto pack = desk_pack();
    SplitMix64 rng(301);
    for (int t = 0; t < 10; ++t) {
        std::vector<Vec> z;
        for (int i = 0; i < 25; ++i)
            z.push_back({(std::int64_t)(rng.next() % 90), (std::int64_t)(rng.next() % 90)});
        auto res = cover(z, fam, pack, CoverParams::axis_faces(), 1);
        for (std::size_t i = 0; i < res.droplets.size(); ++i)
            for (std::size_t j = i + 1; j < res.droplets.size(); ++j)
                EXPECT_FALSE(res.droplets[i].intersects(res.droplets[j]));
    }
}

TEST(Cover, ExtremalClusterCount) {
    auto fam = testutil::load_family('g');
    auto pack = desk_pack();
    std::vector<Vec> chain;
    for (std::int64_t x = 0; x <= 90; x += 3) chain.push_back({x, 0});
    auto res = cover(chain, fam, pack, CoverParams::axis_faces(), 1);
    ASSERT_EQ(res.droplets.size(), 1u);
    // ceil(diam / C4^2) disjoint clusters inside
    Rat diam_sq = res.droplets[0].diameter_sq();
    std::int64_t m = 1;
    while (Rat(m * m) * pack.c4_sq * pack.c4_sq < diam_sq) ++m;
    EXPECT_GE((std::int64_t)res.provenance[0].size(), m);
}

TEST(Cover, ThreeFaceSetWorks) {
    auto fam = testutil::load_family('g');
    auto pack = desk_pack();
    CoverParams cp;
    cp.face_set = {Direction(1, 0), Direction(-1, 1), Direction(-1, -1)};
    auto res = cover({{0, 0}, {4, 1}}, fam, pack, cp, 1);
    ASSERT_EQ(res.droplets.size(), 1u);
    EXPECT_TRUE(res.droplets[0].contains({0, 0}));
    EXPECT_TRUE(res.droplets[0].contains({4, 1}));
    CoverParams bad;
    bad.face_set = {Direction(1, 0), Direction(0, 1), Direction(1, 1)};
    EXPECT_THROW(cover({{0, 0}}, fam, pack, bad, 1), std::invalid_argument);
}

TEST(CoveredCheck, DenseGridCoversItsBox) {
    auto fam = testutil::load_family('g');
    auto pack = desk_pack();
    auto cp = CoverParams::axis_faces();
    Droplet box(cp.face_set, {Rat(10), Rat(10), Rat(0), Rat(0)});
    std::vector<Vec> z;
    for (std::int64_t x = 0; x <= 10; x += 2)
        for (std::int64_t y = 0; y <= 10; y += 2) z.push_back({x, y});
    EXPECT_TRUE(covered_check(box, z, fam, pack, cp, 1));
    EXPECT_FALSE(covered_check(box, {}, fam, pack, cp, 1));
    EXPECT_FALSE(covered_check(box, {{50, 50}}, fam, pack, cp, 1));
}

TEST(CoveredCheck, AizenmanLebowitzScalesFromHistory) {
    auto fam = testutil::load_family('g');
    auto pack = desk_pack();
    auto cp = CoverParams::axis_faces();
    std::vector<Vec> chain;
    for (std::int64_t x = 0; x <= 90; x += 3) chain.push_back({x, 0});
    auto res = cover(chain, fam, pack, cp, 1);
    ASSERT_EQ(res.droplets.size(), 1u);
    double diam = std::sqrt(res.droplets[0].diameter_sq().to_double());
    double c1c4 = pack.c1.to_double() * pack.c4();
    for (double k : {c1c4, 30.0, 50.0}) {
        if (k > diam) continue;
        bool found = false;
        for (const auto& d : res.merge_history) {
            double dd = std::sqrt(d.diameter_sq().to_double());
            if (dd >= k && dd <= 2 * k && covered_check(d, chain, fam, pack, cp, 1))
                found = true;
        }
        EXPECT_TRUE(found) << "k=" << k;
    }
}

TEST(Cover, UnknownCrumbBudget) {
    auto fam = testutil::load_family('g');
    auto pack = desk_pack();
    CoverParams cp = CoverParams::axis_faces();
    cp.crumb_candidate_budget = 1;
    EXPECT_THROW(cover({{0, 0}}, fam, pack, cp, 3), BudgetError);
    cp.cluster_on_unknown_crumb = true;
    auto res = cover({{0, 0}}, fam, pack, cp, 3);
    EXPECT_EQ(res.unknown_crumb_components.size(), 1u);
    EXPECT_EQ(res.droplets.size(), 1u);
}
