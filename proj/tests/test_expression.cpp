#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "walker/errors.hpp"
#include "walker/parse.hpp"
#include "walker/poly4.hpp"
#include "walker/rational.hpp"

using namespace walker;
using walker::testing::random_point;
using walker::testing::random_poly;

namespace {

Poly4 x(int i) { return Poly4::variable(i); }
Poly4 c(long n, long d = 1) { return Poly4(Rational(n, d)); }

} // namespace

TEST(Rational, CanonicalForm) {
  EXPECT_EQ(Rational(6, -4).str(), "-3/2");
  EXPECT_EQ(Rational(0, 7).str(), "0");
  EXPECT_EQ(Rational(0, 7), Rational(0));
  EXPECT_EQ(Rational(10, 5).str(), "2");
  EXPECT_EQ(Rational::parse("-12/18"), Rational(-2, 3));
  EXPECT_GT(Rational(1, 3), Rational(1, 4));
}

TEST(Parse, DifferenceOfSquares) {
  Poly4 p = parse("x1^2 - x2^2");
  ASSERT_EQ(p.terms().size(), 2U);
  EXPECT_EQ(p.terms().at({2, 0, 0, 0}), Rational(1));
  EXPECT_EQ(p.terms().at({0, 2, 0, 0}), Rational(-1));
}

TEST(Parse, OssermanPsi34WithParameter) {
  Poly4 p = parse("4*k*x1*x2 + x2*(x4) - (1/(4*k))*1", {{"k", Rational(1)}});
  EXPECT_EQ(p, c(4) * x(1) * x(2) + x(2) * x(4) - c(1, 4));
}

TEST(Parse, UnboundParameterIsReported) {
  try {
    parse("4*k*x1^2 - (1/(4*k))*f^2", {{"k", Rational(1)}});
    FAIL() << "expected UnboundParameter";
  } catch (const UnboundParameter& e) {
    EXPECT_EQ(e.name(), "f");
  }
}

TEST(Parse, ConstantDivisionFolds) {
  EXPECT_EQ(parse("x4^2/4"), c(1, 4) * x(4) * x(4));
  EXPECT_EQ(parse("(x1 + 2)/(1/3)"), c(3) * x(1) + c(6));
}

TEST(Parse, RejectsMalformedInput) {
  EXPECT_THROW(parse("x1/x2"), ParseError);
  EXPECT_THROW(parse("x1/(2-2)"), ParseError);
  EXPECT_THROW(parse("x1^-1"), ParseError);
  EXPECT_THROW(parse("x1^1.5"), ParseError);
  EXPECT_THROW(parse("x1^(2)"), ParseError);
  EXPECT_THROW(parse("2 x1"), ParseError);
  EXPECT_THROW(parse("0.5*x1"), ParseError);
  EXPECT_THROW(parse("(x1 + x2"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
}

TEST(Parse, ErrorCarriesPosition) {
  try {
    parse("x1 + * x2");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 5U);
  }
}

TEST(Parse, WhitespaceAndUnaryMinus) {
  EXPECT_EQ(parse("  - x1 *  - x2 "), x(1) * x(2));
  EXPECT_EQ(parse("-(x3)^2"), c(-1) * x(3) * x(3));
}

TEST(Differentiate, Examples) {
  EXPECT_EQ(differentiate(parse("x1^2 - x2^2"), 1), c(2) * x(1));
  EXPECT_EQ(differentiate(parse("4*x1*x2 + x2*x4 - 1/4"), 2), c(4) * x(1) + x(4));
  EXPECT_TRUE(differentiate(parse("x1^2"), 3).is_zero());
}

TEST(Evaluate, Examples) {
  EXPECT_EQ(eval_exact(parse("x1^2 - x2^2"), {1, 1, 0, 0}), Rational(0));
  EXPECT_EQ(eval_exact(parse("x1^3 - x2^3"), {1, 1, 0, 0}), Rational(0));
  EXPECT_EQ(eval_exact(parse("4*x1*x2 + x2*x4 - 1/4"), {Rational(1, 4), 0, 0, 1}), Rational(-1, 4));
  EXPECT_DOUBLE_EQ(eval_float(parse("x1^2"), {3.0, 0, 0, 0}), 9.0);
  EXPECT_DOUBLE_EQ(eval_float(parse("x1^2 - x2^2"), {2.0, 1.0, 5.0, -5.0}), 3.0);
}

TEST(Evaluate, OverflowIsReported) {
  EXPECT_THROW(eval_float(parse("x1^400"), {1e10, 0, 0, 0}), EvaluationOverflow);
}

class PolyProperties : public ::testing::TestWithParam<int> {};

TEST_P(PolyProperties, RenderRoundTrips) {
  CounterRng rng(static_cast<std::uint64_t>(GetParam()));
  Poly4 p = random_poly(rng);
  EXPECT_EQ(parse(p.render()), p) << p.render();
}

TEST_P(PolyProperties, RingLaws) {
  CounterRng rng(100 + static_cast<std::uint64_t>(GetParam()));
  Poly4 a = random_poly(rng), b = random_poly(rng), d = random_poly(rng);
  EXPECT_EQ((a * b) * d, a * (b * d));
  EXPECT_EQ(a * (b + d), a * b + a * d);
  EXPECT_EQ(a + b, b + a);
  EXPECT_TRUE((a - a).is_zero());
}

TEST_P(PolyProperties, LeibnizAndMixedPartials) {
  CounterRng rng(200 + static_cast<std::uint64_t>(GetParam()));
  Poly4 a = random_poly(rng), b = random_poly(rng);
  for (int i = 1; i <= 4; ++i) {
    EXPECT_EQ(differentiate(a * b, i), differentiate(a, i) * b + a * differentiate(b, i));
    for (int j = 1; j <= 4; ++j) {
      EXPECT_EQ(differentiate(differentiate(a, i), j), differentiate(differentiate(a, j), i));
    }
  }
}

TEST_P(PolyProperties, ExactAndFloatEvaluationAgree) {
  CounterRng rng(300 + static_cast<std::uint64_t>(GetParam()));
  Poly4 a = random_poly(rng), b = random_poly(rng);
  Point4<Rational> p = random_point(rng);
  EXPECT_EQ(eval_exact(a + b, p), eval_exact(a, p) + eval_exact(b, p));
  double exact = eval_exact(a, p).to_double();
  double approx = eval_float(a, to_double(p));
  EXPECT_LE(std::abs(exact - approx), 1e-12 * std::max(1.0, std::abs(exact)));
}

INSTANTIATE_TEST_SUITE_P(Randomized, PolyProperties, ::testing::Range(0, 25));
