#include <random>

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "countdiff/counting.hpp"

using namespace countdiff;

namespace {

CountingPolynomial C(const std::string &s) { return parse_counting(s); }
DifferentialCountingPolynomial D(const std::string &s) { return parse_differential_counting(s); }

const CountingPolynomial oo = CountingPolynomial::infinity();
const CountingPolynomial N0 = CountingPolynomial::aleph0();

} // namespace

TEST(CountingRing, AddAndMultiplyExamples) {
    EXPECT_EQ(((oo - N0) + CountingPolynomial(1)).to_string(), "oo - N0 + 1");
    EXPECT_EQ((CountingPolynomial(2) * oo * (oo - CountingPolynomial(2))).to_string(), "2*oo^2 - 4*oo");
    auto l = DifferentialCountingPolynomial::term(EllAlephPolynomial::variable(kEll), ExponentPolynomial());
    auto sum = l * D("oo^l") + (D("oo") - l) * D("oo^(l - 1)");
    EXPECT_EQ(sum.to_string(), "(l + 1)*oo^l - l*oo^(l - 1)");
    EXPECT_EQ(sum, D("(l + 1)*oo^l - l*oo^(l - 1)"));
}

TEST(CountingRing, EvaluateAtOrder) {
    auto ns = D("oo^(l^3 + 11/2*l^2 + 17/2*l + 4)");
    EXPECT_EQ(ns.to_string(), "oo^(l^3 + 11/2*l^2 + 17/2*l + 4)");
    EXPECT_EQ(ns.evaluate(1), CountingPolynomial::infinity(19));
    EXPECT_EQ(ns.evaluate(0), CountingPolynomial::infinity(4));
    EXPECT_EQ(ns.evaluate(2), CountingPolynomial::infinity(51));
    EXPECT_EQ(ns.evaluate(3), CountingPolynomial::infinity(106));
    auto better = D("oo^(l + 2) - oo^(l + 1) + (l + 1)*oo^l - l*oo^(l - 1)");
    EXPECT_EQ(better.evaluate(2).to_string(), "oo^4 - oo^3 + 3*oo^2 - 2*oo");
    // the l*oo^(l-1) term vanishes at l = 0 before its exponent turns negative
    EXPECT_EQ(better.evaluate(0).to_string(), "oo^2 - oo + 1");
    EXPECT_EQ(D("7").evaluate(5), CountingPolynomial(7));
    EXPECT_THROW(D("oo^(l - 1)").evaluate(0), NegativeExponent);
}

TEST(CountingRing, ExponentPolynomialValidation) {
    EXPECT_NO_THROW(ExponentPolynomial::from_coefficients({Rational(0), Rational(1, 2), Rational(1, 2)}));
    EXPECT_THROW(ExponentPolynomial::from_coefficients({Rational(0), Rational(1, 2)}), NotIntegerValued);
    EXPECT_THROW(D("oo^(N0)"), HasAleph);
}

TEST(CountingRing, EventualOrder) {
    EXPECT_TRUE(eventual_less(C("oo^2 - oo"), C("oo^2")));
    EXPECT_TRUE(eventual_less(C("oo^3 - oo^2"), C("oo^3 - oo^2 + 1")));
    EXPECT_FALSE(eventual_less(oo, oo));
    EXPECT_THROW(eventual_less(N0, oo), HasAleph);
}

TEST(CountingRing, Estimates) {
    EXPECT_EQ(lower_estimate(oo - N0, 3), CountingPolynomial(3));
    EXPECT_EQ(upper_estimate(oo - N0, 1), C("oo - 1"));
    EXPECT_EQ(lower_estimate(C("oo^3 - oo^2 + oo - N0"), 1), C("oo^3 - oo^2 + 1"));
}

TEST(CountingRing, DecideSets) {
    auto d = decide_sets(C("oo^3 - oo^2"), C("oo^3 - oo^2 + oo - N0"), 8);
    EXPECT_EQ(d.decision, Decision::Distinct);
    ASSERT_TRUE(d.witness.has_value());
    EXPECT_EQ(d.witness->first, 0u);
    EXPECT_EQ(d.witness->second, 1u);
    auto b = D("oo^(l + 2) - oo^(l + 1) + (l + 1)*oo^l - l*oo^(l - 1)");
    for (long l = 0; l < 5; ++l) EXPECT_EQ(decide_sets(b.evaluate(l), b.evaluate(l)).decision, Decision::Equal);
    EXPECT_EQ(decide_sets(oo - N0, oo - N0).decision, Decision::Unknown);
    EXPECT_EQ(decide_sets(oo - CountingPolynomial(1), oo).decision, Decision::Distinct);
}

TEST(CountingRing, SumSequences) {
    CountingSequence t({C("oo^2 - oo")}, D("oo^3 - oo^2"));
    CountingSequence tinf({CountingPolynomial(1)}, D("oo - N0"));
    auto s = sum_sequences({t, tinf});
    EXPECT_EQ(s.to_string(), "l=0: oo^2 - oo + 1; l>=1: oo^3 - oo^2 + oo - N0");
    auto a = CountingSequence(D("(oo - 1)*oo^(l + 1)"));
    auto b = CountingSequence(D("(l + 1)*oo^l - l*oo^(l - 1)"));
    EXPECT_EQ(sum_sequences({a, b}).tail(), D("oo^(l + 2) - oo^(l + 1) + (l + 1)*oo^l - l*oo^(l - 1)"));
    EXPECT_EQ(sum_sequences({}).tail(), DifferentialCountingPolynomial());
    EXPECT_EQ(sum_sequences({}).value(3), CountingPolynomial());
}

TEST(CountingRing, SequenceTextRoundTrip) {
    for (const std::string text : {"l=0: oo^2 - oo + 1; l>=1: oo^3 - oo^2 + oo - N0",
                                   "oo^(l + 2) - oo^(l + 1) + (l + 1)*oo^l - l*oo^(l - 1)",
                                   "oo^(l^3 + 11/2*l^2 + 17/2*l + 4)", "l=0: oo; l>=1: 2*oo", "0"}) {
        EXPECT_EQ(parse_sequence(text).to_string(), text);
    }
    EXPECT_THROW(parse_sequence("l=1: oo; l>=2: oo"), ParseError);
    EXPECT_THROW(parse_sequence("l=0: oo"), ParseError);
}

TEST(CountingRing, RingLawsRandom) {
    std::mt19937 rng(1);
    for (int i = 0; i < 300; ++i) {
        auto a = corpus::random_counting(rng);
        auto b = corpus::random_counting(rng);
        auto c = corpus::random_counting(rng);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(parse_counting(a.to_string()), a);
    }
}

TEST(CountingRing, EvaluationIsHomomorphic) {
    std::mt19937 rng(2);
    for (int i = 0; i < 200; ++i) {
        auto a = corpus::random_differential_counting(rng);
        auto b = corpus::random_differential_counting(rng);
        EXPECT_EQ(parse_differential_counting(a.to_string()), a);
        for (long l = 0; l < 4; ++l) {
            EXPECT_EQ((a + b).evaluate(l), a.evaluate(l) + b.evaluate(l));
            EXPECT_EQ((a * b).evaluate(l), a.evaluate(l) * b.evaluate(l));
        }
    }
}

TEST(CountingRing, EventualOrderIsTotal) {
    std::mt19937 rng(3);
    for (int i = 0; i < 300; ++i) {
        auto a = corpus::random_counting(rng, false);
        auto b = corpus::random_counting(rng, false);
        const int n = int(eventual_less(a, b)) + int(eventual_less(b, a)) + int(a == b);
        EXPECT_EQ(n, 1);
    }
}

TEST(CountingRing, DecideNeverEqualWithAleph) {
    std::mt19937 rng(4);
    for (int i = 0; i < 300; ++i) {
        auto a = corpus::random_counting(rng);
        if (!a.has_aleph()) a += N0;
        EXPECT_NE(decide_sets(a, a, 3).decision, Decision::Equal);
        EXPECT_NE(decide_sets(corpus::random_counting(rng), a, 3).decision, Decision::Equal);
    }
}
