#include <gtest/gtest.h>

#include "ukcm/rational.hpp"

using ukcm::Rat;

TEST(Rational, LowestTerms) {
    Rat r(6, -9);
    EXPECT_EQ(r.num(), -2);
    EXPECT_EQ(r.den(), 3);
    EXPECT_EQ(Rat(0, 5), Rat(0));
}

TEST(Rational, Arithmetic) {
    EXPECT_EQ(Rat(1, 2) + Rat(1, 3), Rat(5, 6));
    EXPECT_EQ(Rat(1, 2) * Rat(2, 3), Rat(1, 3));
    EXPECT_EQ(Rat(7, 2) / Rat(7), Rat(1, 2));
    EXPECT_LT(Rat(-3, 2), Rat(-1));
    EXPECT_EQ((-Rat(3, 4)).num(), -3);
}

TEST(Rational, FloorCeil) {
    EXPECT_EQ(Rat(7, 2).floor(), 3);
    EXPECT_EQ(Rat(7, 2).ceil(), 4);
    EXPECT_EQ(Rat(-7, 2).floor(), -4);
    EXPECT_EQ(Rat(-7, 2).ceil(), -3);
    EXPECT_EQ(Rat(4).floor(), 4);
    EXPECT_EQ(Rat(4).ceil(), 4);
}

TEST(Rational, Parse) {
    EXPECT_EQ(Rat::parse("3/4"), Rat(3, 4));
    EXPECT_EQ(Rat::parse("-2.75"), Rat(-11, 4));
    EXPECT_EQ(Rat::parse("10"), Rat(10));
    EXPECT_THROW(Rat::parse(""), std::invalid_argument);
}

TEST(Rational, OverflowIsReported) {
    Rat big(INT64_MAX / 2, 1);
    EXPECT_THROW(big * big, ukcm::arithmetic_overflow);
    EXPECT_NO_THROW(big + Rat(1));
}
