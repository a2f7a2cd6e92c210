#include <gtest/gtest.h>

#include "ukcm/difficulty.hpp"
#include "util.hpp"

using namespace ukcm;

namespace {
DifficultyValue diff(char fam_cls, Direction u) {
    auto fam = testutil::load_family(fam_cls);
    return difficulty(fam, u, DifficultyBudget{});
}
}  // namespace

TEST(Difficulty, UnstableIsZero) {
    EXPECT_TRUE(diff('g', Direction(1, 1)).is_zero());
    EXPECT_TRUE(diff('a', Direction(1, 1)).is_zero());
}

TEST(Difficulty, FatArcInteriorIsInfinite) {
    EXPECT_TRUE(diff('a', Direction(-1, -1)).is_infinite());
    EXPECT_TRUE(diff('a', Direction(-1, 0)).is_infinite());  // semi-isolated endpoint
    EXPECT_TRUE(diff('b', Direction(-2, -1)).is_infinite());
}

TEST(Difficulty, FigureLabelsFamilyA) {
    auto d10 = diff('a', Direction(1, 0));
    ASSERT_EQ(d10.kind, DifficultyValue::Kind::Finite);
    EXPECT_EQ(d10.value, 1);
    auto d01 = diff('a', Direction(0, 1));
    ASSERT_EQ(d01.kind, DifficultyValue::Kind::Finite);
    EXPECT_EQ(d01.value, 2);
}

TEST(Difficulty, FigureLabelsFamilyB) {
    EXPECT_EQ(diff('b', Direction(1, 0)).value, 1);
    EXPECT_EQ(diff('b', Direction(0, 1)).value, 1);
}

TEST(Difficulty, FigureLabelsFamilyC) {
    EXPECT_EQ(diff('c', Direction(1, 0)).value, 1);
    EXPECT_EQ(diff('c', Direction(0, 1)).value, 2);
    EXPECT_EQ(diff('c', Direction(-1, 0)).value, 2);
    EXPECT_EQ(diff('c', Direction(0, -1)).value, 2);
}

TEST(Difficulty, FigureLabelsFamilyD) {
    EXPECT_EQ(diff('d', Direction(1, 0)).value, 1);
    EXPECT_EQ(diff('d', Direction(-1, 0)).value, 1);
    EXPECT_EQ(diff('d', Direction(0, 1)).value, 2);
    EXPECT_EQ(diff('d', Direction(0, -1)).value, 2);
}

TEST(Difficulty, FigureLabelsFamilyE) {
    EXPECT_EQ(diff('e', Direction(1, 0)).value, 1);
    EXPECT_EQ(diff('e', Direction(0, 1)).value, 1);
    EXPECT_EQ(diff('e', Direction(-1, 0)).value, 2);
    EXPECT_EQ(diff('e', Direction(0, -1)).value, 2);
}

TEST(Difficulty, FigureLabelsFamilyF) {
    EXPECT_EQ(diff('f', Direction(1, 0)).value, 1);
    EXPECT_EQ(diff('f', Direction(0, 1)).value, 1);
    EXPECT_EQ(diff('f', Direction(-1, 0)).value, 1);
    EXPECT_EQ(diff('f', Direction(0, -1)).value, 2);
}

TEST(Difficulty, FigureLabelsFamilyG) {
    for (auto u : {Direction(1, 0), Direction(0, 1), Direction(-1, 0), Direction(0, -1)})
        EXPECT_EQ(diff('g', u).value, 1);
}

TEST(Difficulty, CertificatesReverify) {
    for (char c : {'a', 'b', 'c', 'd', 'e', 'f', 'g'}) {
        auto fam = testutil::load_family(c);
        auto ss = stable_set(fam);
        for (Direction u : ss.isolated_directions()) {
            auto v = difficulty(fam, ss, u, DifficultyBudget{});
            ASSERT_EQ(v.kind, DifficultyValue::Kind::Finite) << "family " << c;
            ASSERT_TRUE(v.certificate.has_value());
            EXPECT_EQ((int)v.certificate->extra.size(), v.value);
            EXPECT_TRUE(verify_growth_certificate(fam, *v.certificate)) << "family " << c;
        }
    }
}

TEST(Difficulty, BudgetValidation) {
    auto fam = testutil::load_family('g');
    DifficultyBudget bad;
    bad.n_max = 0;
    EXPECT_THROW(difficulty(fam, Direction(1, 0), bad), std::invalid_argument);
    DifficultyBudget tiny_window;
    tiny_window.window_radius = 1;  // below the family range sqrt(2)
    EXPECT_THROW(difficulty(fam, Direction(1, 0), tiny_window), std::invalid_argument);
}

TEST(Difficulty, ExhaustedBudgetIsUnknown) {
    // family d's hard direction (0,1) needs two infections; n_max=1 must
    // report Unknown, never guess
    auto fam = testutil::load_family('d');
    DifficultyBudget b;
    b.n_max = 1;
    auto v = difficulty(fam, Direction(0, 1), b);
    EXPECT_TRUE(v.is_unknown());
}
