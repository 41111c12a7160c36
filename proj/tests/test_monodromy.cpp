#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "melnikov/monodromy.hpp"

using namespace melnikov;

namespace {

const double four_pi_sq = 4 * std::numbers::pi * std::numbers::pi;

LoopWord w(std::string_view s) { return parse_word(s); }

}  // namespace

TEST(LoopWord, FreeAndCyclicReduction) {
    EXPECT_TRUE(w("g1 g2 g2^-1 g1^-1").empty());
    EXPECT_EQ(w("g1 g2 g2^-1 g3"), w("g1 g3"));
    EXPECT_EQ(w("[g1,g2]").to_string(), "g1 g2 g1^-1 g2^-1");
    EXPECT_EQ(w("(g1 g2)^2"), w("g1 g2 g1 g2"));
    EXPECT_EQ(w("g1^-2"), w("g1^-1 g1^-1"));
    EXPECT_EQ(w("delta"), w("d"));
    EXPECT_EQ(LoopWord(Alphabet::D4, {}).to_string(), "1");

    EXPECT_EQ(w("d^-1 g1 d").cyclic_reduction(), w("g1"));
    EXPECT_TRUE(w("d^-1 g1 d").freely_homotopic(w("g1")));
    EXPECT_TRUE(w("g2 g3 g1").freely_homotopic(w("g1 g2 g3")));
    EXPECT_FALSE(w("g1 g3 g2").freely_homotopic(w("g1 g2 g3")));
    EXPECT_FALSE(w("g1").freely_homotopic(w("g1^-1")));
}

TEST(LoopWord, ParseErrors) {
    EXPECT_THROW(w("g4"), ValidationError);
    EXPECT_THROW(w("[g1 g2]"), ValidationError);
    EXPECT_THROW(w("g1)"), ValidationError);
    EXPECT_THROW(parse_word("g1", Alphabet::A3), ValidationError);
    EXPECT_NO_THROW(parse_word("ds dl^-1 dr", Alphabet::A3));
}

TEST(Variation, TriangleTable) {
    const LoopWord d = w("d");
    const LoopWord v1 = var(d, Twist::D4_l0);
    EXPECT_EQ(v1, w("g1 g2 g3"));
    const LoopWord v2 = var(v1, Twist::D4_l0);
    EXPECT_EQ(v2, w("g1 g2 g1^-1 g2^-1"));
    EXPECT_TRUE(var(v2, Twist::D4_l0).empty());
    EXPECT_EQ(var(w("g3 g1 g2"), Twist::D4_l0), v2);
    EXPECT_EQ(var(d.inverse(), Twist::D4_l0), v1.inverse());
    EXPECT_TRUE(var(LoopWord(Alphabet::D4, {}), Twist::D4_l0).empty());
    EXPECT_THROW(var(w("g1"), Twist::D4_l0), ValidationError);
    EXPECT_THROW(var(d, Twist::A3_l0), ValidationError);
    EXPECT_THROW(parse_twist("d4-l1"), ValidationError);
}

TEST(Variation, EightLoopTablesTerminate) {
    const auto ds = parse_word("ds", Alphabet::A3);
    EXPECT_TRUE(var(var(ds, Twist::A3_l0), Twist::A3_l0).empty());
    EXPECT_TRUE(var(var(parse_word("dl", Alphabet::A3), Twist::A3_l14), Twist::A3_l14).empty());
    EXPECT_EQ(parse_twist("a3-l1/4"), Twist::A3_l14);
}

TEST(Homology, ExponentSums) {
    EXPECT_EQ(homology_class(w("[g1,g2]")), (std::vector<int>{0, 0, 0, 0}));
    EXPECT_EQ(homology_class(w("g1 g2 g3")), (std::vector<int>{0, 1, 1, 1}));
    EXPECT_EQ(homology_class(w("d^-1 g1 d")), (std::vector<int>{0, 1, 0, 0}));
}

TEST(Pairing, KnownValues) {
    EXPECT_LT(std::abs(pairing(w("d"))), 1e-8);
    const auto c = pairing(w("[g1,g2]"));
    EXPECT_NEAR(c.real(), -four_pi_sq, 1e-6);
    EXPECT_NEAR(c.imag(), 0, 1e-6);
    // The obstruction: zero in homology but not in the pairing.
    EXPECT_EQ(homology_class(w("[g1,g2]")), (std::vector<int>{0, 0, 0, 0}));
    EXPECT_GT(std::abs(c), 1);
    EXPECT_TRUE(std::isfinite(std::abs(pairing(w("g1 g2 g3")))));
}

TEST(Pairing, BranchIndependent) {
    for (auto s : {"g1 g2 g3", "[g1,g2]", "d"}) {
        const auto a = pair_with_form(w(s), {}, 0).value;
        const auto b = pair_with_form(w(s), {}, 2 * std::numbers::pi).value;
        EXPECT_LT(std::abs(a - b), 1e-8) << s;
    }
}

TEST(Pairing, AdditiveOnWellDefinedWords) {
    const auto p = w("g1 g2 g3"), q = w("[g1,g2]"), d = w("d");
    EXPECT_LT(std::abs(pairing(p * q) - (pairing(p) + pairing(q))), 1e-8);
    EXPECT_LT(std::abs(pairing(d * q) - (pairing(d) + pairing(q))), 1e-8);
    EXPECT_LT(std::abs(pairing(q * q) - 2.0 * pairing(q)), 1e-8);
}

TEST(Pairing, StableUnderPathDeformation) {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    const auto ref = pairing(w("[g1,g2]"));
    const auto ref3 = pairing(w("g1 g2 g3"));
    for (int trial = 0; trial < 5; ++trial) {
        PuncturedModel m;
        m.base *= 1 + jitter(rng);
        m.base += std::complex<double>(jitter(rng), 0);
        for (auto& r : m.radius) r *= 1 + jitter(rng);
        EXPECT_LT(std::abs(pairing(w("[g1,g2]"), m) - ref), 1e-7);
        EXPECT_LT(std::abs(pairing(w("g1 g2 g3"), m) - ref3), 1e-7);
    }
}

TEST(Pairing, PreconditionsNamed) {
    auto r = pair_with_form(w("g1"));
    EXPECT_FALSE(r.well_defined);
    EXPECT_NE(r.diagnosis.find("1/(z-z2)"), std::string::npos);
    auto s = pair_with_form(w("g1 g2"));
    EXPECT_FALSE(s.well_defined);
    EXPECT_NE(s.diagnosis.find("single-valued"), std::string::npos);
    EXPECT_THROW(pairing(w("g3")), ValidationError);
    EXPECT_THROW(pairing(parse_word("ds", Alphabet::A3)), ValidationError);
}
