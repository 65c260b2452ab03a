#include <gtest/gtest.h>

#include "tmlab/errors.hpp"
#include "tmlab/schedules.hpp"

using namespace tmlab;

TEST(RealSequence, Parse) {
    const auto c = RealSequence::parse("const:1/2");
    EXPECT_DOUBLE_EQ(c(7), 0.5);
    EXPECT_EQ(c.exact(7), mpq_class(1, 2));
    const auto r = RealSequence::parse("ratio:1,1,1,2");
    EXPECT_EQ(r.exact(3), mpq_class(4, 5));
    EXPECT_DOUBLE_EQ(RealSequence::parse("const:0.25")(0), 0.25);
    EXPECT_EQ(RealSequence::parse("const:0.0625").exact(0), mpq_class(1, 16));
    EXPECT_EQ(RealSequence::parse("const:010/08").exact(0), mpq_class(5, 4));
    EXPECT_THROW(RealSequence::parse("linear:1"), InvalidInput);
    EXPECT_THROW(RealSequence::parse("const:1/0"), InvalidInput);
    EXPECT_THROW(RealSequence::parse("ratio:0,1,0,0").exact(0), InvalidInput);
}

TEST(Presets, HarmonicValues) {
    const auto h = preset("harmonic");
    EXPECT_EQ(h.beta.exact(3), mpq_class(4, 5));
    EXPECT_DOUBLE_EQ(h.lambda(10), 0.5);
    EXPECT_DOUBLE_EQ(h.gamma(0), 2.0);
    EXPECT_DOUBLE_EQ(h.gamma(1), 1.5);
    EXPECT_EQ(h.sigma_star(RateValue(23), RateValue(5)), RateValue(144));
    EXPECT_EQ(h.sigma.eval(1), 6);
    EXPECT_EQ(h.sigma.eval(0), 2);
    EXPECT_EQ(h.Lambda, 2);
    EXPECT_EQ(h.G, 2);
    EXPECT_THROW(preset("nope"), InvalidInput);
}

TEST(Presets, ConstantGammaVariant) {
    const auto b = preset("constant-gamma-harmonic-beta");
    EXPECT_EQ(b.G, 1);
    EXPECT_EQ(b.Gamma, 1);
    EXPECT_DOUBLE_EQ(b.gamma(5), 1.0);
    EXPECT_EQ(b.chi_gamma.eval(100), 0);
}

TEST(Finalize, RejectsBadBundles) {
    auto b = preset("harmonic");
    b.Lambda = 0;
    EXPECT_THROW(finalize(b), InvalidInput);
    b = preset("harmonic");
    b.eta = Counterfunction::parse("arg2");
    EXPECT_THROW(finalize(b), InvalidInput);
}

TEST(ChiT, Examples) {
    const auto h = preset("harmonic");
    EXPECT_EQ(chi_T(h, 1, 0), RateValue(1));
    EXPECT_EQ(chi_T(h, 1, 4), RateValue(9));
    const auto c = preset("constant-gamma-harmonic-beta");
    for (int k : {0, 3, 50}) EXPECT_EQ(chi_T(c, 1, k), RateValue(0));
    auto big_n = h;
    big_n.N_Gamma = 100;
    EXPECT_EQ(chi_T(big_n, 1, 4), RateValue(100));
    EXPECT_THROW(chi_T(h, 0, 0), InvalidInput);
}

TEST(Audit, HarmonicPasses) {
    const auto report = audit_schedule(preset("harmonic"), 20'000);
    EXPECT_TRUE(report.pass()) << to_json(report).dump(2);
    ASSERT_NE(report.find("C1q*-sigma_star"), nullptr);
    EXPECT_EQ(report.find("C1q*-sigma_star")->mode, "float");
    EXPECT_EQ(audit_schedule(preset("harmonic"), 1000).find("C1q*-sigma_star")->mode, "exact");
    EXPECT_TRUE(audit_schedule(preset("constant-gamma-harmonic-beta"), 5000).pass());
}

TEST(Audit, WrongEtaIsCaught) {
    auto b = preset("harmonic");
    b.eta = Counterfunction::constant(0);
    const auto report = audit_schedule(finalize(b), 1000);
    EXPECT_FALSE(report.pass());
    const auto* eta = report.find("C4q-eta");
    ASSERT_NE(eta, nullptr);
    EXPECT_FALSE(eta->pass);
    EXPECT_EQ(eta->first_violation["k"], 2);
    EXPECT_EQ(eta->first_violation["n"], 0);
}

TEST(Audit, BetaOneBreaksSigma) {
    auto b = preset("harmonic");
    b.beta = RealSequence::parse("const:1");
    const auto report = audit_schedule(finalize(b), 100);
    const auto* sigma = report.find("C1q-sigma");
    ASSERT_NE(sigma, nullptr);
    EXPECT_FALSE(sigma->pass);
}

TEST(Audit, RangeAndHorizon) {
    auto b = preset("harmonic");
    b.lambda = RealSequence::parse("const:3/2");
    EXPECT_FALSE(audit_schedule(finalize(b), 10).find("range")->pass);
    EXPECT_THROW(audit_schedule(preset("harmonic"), 0), InvalidInput);
}
