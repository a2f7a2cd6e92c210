#include <gtest/gtest.h>

#include <sstream>

#include "ukcm/experiment.hpp"

using namespace ukcm;

TEST(ExperimentConfig, ParseAndLookup) {
    std::istringstream is(
        "# comment\n"
        "[classify]\n"
        "family = corpus/family_a.fam\n"
        "budget_nmax = 3\n"
        "\n"
        "[estimate]\n"
        "q = 0.2\n");
    auto cfg = ExperimentConfig::parse(is);
    EXPECT_EQ(cfg.get("classify", "family"), "corpus/family_a.fam");
    EXPECT_EQ(cfg.get_int("classify", "budget_nmax", 0), 3);
    EXPECT_EQ(cfg.get_double("estimate", "q", 0), 0.2);
    EXPECT_EQ(cfg.get("estimate", "missing", "dflt"), "dflt");
    EXPECT_TRUE(cfg.has("estimate", "q"));
    EXPECT_FALSE(cfg.has("estimate", "missing"));
}

TEST(ExperimentConfig, EchoRoundTrip) {
    ExperimentConfig cfg;
    cfg.set("verify", "family", "x.fam");
    cfg.set("verify", "n", "0");
    std::istringstream is(cfg.echo());
    auto cfg2 = ExperimentConfig::parse(is);
    EXPECT_EQ(cfg2.get("verify", "family"), "x.fam");
    EXPECT_EQ(cfg2.get("verify", "n"), "0");
}

TEST(ExperimentConfig, ParseErrors) {
    std::istringstream bad1("[unterminated\n");
    EXPECT_THROW(ExperimentConfig::parse(bad1), ParseError);
    std::istringstream bad2("keyvalue\n");
    EXPECT_THROW(ExperimentConfig::parse(bad2), ParseError);
}

TEST(PackFromStrings, OverridesAndValidation) {
    auto p = pack_from_strings(2, {{"c1", "2"}, {"c2p", "3"}, {"k", "12"}});
    EXPECT_EQ(p.c1, Rat(2));
    EXPECT_EQ(p.c2p_sq, Rat(9));
    EXPECT_EQ(p.K, Rat(12));
    EXPECT_THROW(pack_from_strings(2, {{"bogus", "1"}}), std::invalid_argument);
    // chain violations surface immediately
    EXPECT_THROW(pack_from_strings(2, {{"c2p", "100"}}), std::invalid_argument);
    // decimal values parse as exact rationals
    auto p2 = pack_from_strings(2, {{"c1", "2.5"}, {"c2p", "3.5"}, {"k", "25"}});
    EXPECT_EQ(p2.c1, Rat(5, 2));
    EXPECT_EQ(p2.c2p_sq, Rat(49, 4));
}

TEST(Fmt6, SixSignificantDigits) {
    EXPECT_EQ(fmt6(0.3333333333), "0.333333");
    EXPECT_EQ(fmt6(123456789.0), "1.23457e+08");
    EXPECT_EQ(fmt6(1.0), "1");
}
