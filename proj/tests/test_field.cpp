#include <gtest/gtest.h>

#include <random>

#include "cpgeo/field/scalar.hpp"
#include "cpgeo/linalg.hpp"

using namespace cpgeo;

namespace {

const std::vector<std::string> xyz = {"x", "y", "z"};

Exact P(const std::string& s) { return parse_scalar(s, xyz); }

Exact random_poly(std::mt19937& rng, int terms, int maxdeg) {
  std::uniform_int_distribution<int> coef(-5, 5), deg(0, maxdeg);
  Exact r(0);
  for (int t = 0; t < terms; ++t) {
    Exact m(long(coef(rng)));
    for (std::size_t v = 0; v < 3; ++v)
      for (int d = deg(rng); d > 0; --d) m = m * Exact::variable(v);
    r = r + m;
  }
  return r;
}

}  // namespace

TEST(Scalar, ParsesAndPrintsCanonically) {
  EXPECT_EQ(to_string(P("x*y + 2 - x*y")), "2");
  EXPECT_EQ(to_string(P("(x^2 - y^2)/(x - y)"), xyz), "x + y");
  EXPECT_EQ(to_string(P("1/2 + 1/3")), "5/6");
  EXPECT_EQ(to_string(P("-y"), xyz), "-y");
  EXPECT_EQ(P("2/(2*x)"), P("1/x"));
}

TEST(Scalar, RejectsOutsideGrammar) {
  EXPECT_THROW(P("1.5"), ScalarSyntaxError);
  EXPECT_THROW(P("w + 1"), ScalarSyntaxError);
  EXPECT_THROW(P("x^-1"), ScalarSyntaxError);
  EXPECT_THROW(P("(x"), ScalarSyntaxError);
  EXPECT_THROW(P("1/0"), ScalarSyntaxError);
  try {
    P("x + $");
    FAIL();
  } catch (const ScalarSyntaxError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
}

TEST(Scalar, RoundTripsRandomRationalFunctions) {
  std::mt19937 rng(7);
  for (int i = 0; i < 40; ++i) {
    const Exact num = random_poly(rng, 4, 2), den = random_poly(rng, 3, 2);
    if (den.is_zero()) continue;
    const Exact f = num / den;
    EXPECT_EQ(parse_scalar(to_string(f, xyz), xyz), f) << to_string(f, xyz);
  }
}

TEST(Scalar, FieldAxiomsOnRandomElements) {
  std::mt19937 rng(11);
  for (int i = 0; i < 30; ++i) {
    const Exact a = random_poly(rng, 3, 2), b = random_poly(rng, 3, 2), c = random_poly(rng, 2, 1);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * b, b * a);
    if (!b.is_zero()) {
      EXPECT_EQ((a / b) * b, a);
      EXPECT_TRUE((a / b - a / b).is_zero());
    }
  }
}

TEST(Scalar, QuotientRuleAndEvaluation) {
  const Exact f = P("x^2*y/(1 + z)");
  EXPECT_EQ(f.partial(0), P("2*x*y/(1 + z)"));
  EXPECT_EQ(f.partial(2), P("-x^2*y/(1 + z)^2"));
  const std::vector<Q> pt = {Q(1, 2), Q(3), Q(-1, 3)};
  EXPECT_EQ(f.evaluate(pt), Q(9, 8));
}

TEST(Scalar, DenominatorIsMonic) {
  const Exact f = P("1/(3*x + 6)");
  const auto& lead = f.denominator().leading();
  EXPECT_EQ(lead.c, Q(1));
  EXPECT_EQ(to_string(f, xyz), "1/3/(x + 2)");
  EXPECT_EQ(f * P("3*x + 6"), Exact(1));
}

TEST(Jet, MatchesExactDerivativesAtSamples) {
  const std::vector<std::vector<Q>> pts = {{Q(1), Q(2), Q(3)}, {Q(-1, 2), Q(1, 3), Q(2)}};
  auto sp = std::make_shared<const JetSpace>(3, 3, pts);
  const Exact f = P("(x^2 + y*z)/(1 + x^2)");
  const Float jf = Float::from_exact(f, sp);
  const Float dx = jf.partial(0), dxy = dx.partial(1);
  for (std::size_t p = 0; p < pts.size(); ++p) {
    EXPECT_NEAR(jf.value(p), f.evaluate(pts[p]).get_d(), 1e-12);
    EXPECT_NEAR(dx.value(p), f.partial(0).evaluate(pts[p]).get_d(), 1e-12);
    EXPECT_NEAR(dxy.value(p), f.partial(0).partial(1).evaluate(pts[p]).get_d(), 1e-12);
  }
  EXPECT_EQ(dx.order(), 2);
  EXPECT_EQ(dxy.order(), 1);
}

TEST(Jet, ArithmeticAgreesWithExact) {
  const std::vector<std::vector<Q>> pts = {{Q(2), Q(-1), Q(1, 2)}};
  auto sp = std::make_shared<const JetSpace>(3, 2, pts);
  const Exact a = P("x*y - z"), b = P("1 + x^2");
  const Float ja = Float::from_exact(a, sp), jb = Float::from_exact(b, sp);
  const Float q = ja / jb, prod = ja * jb;
  EXPECT_NEAR(q.value(0), (a / b).evaluate(pts[0]).get_d(), 1e-13);
  EXPECT_NEAR(q.partial(2).value(0), (a / b).partial(2).evaluate(pts[0]).get_d(), 1e-13);
  EXPECT_NEAR(prod.partial(0).value(0), (a * b).partial(0).evaluate(pts[0]).get_d(), 1e-13);
}

TEST(Linalg, ExactKernelRankInverse) {
  Matrix<Exact> m(3, 3);
  m(0, 0) = P("x");
  m(0, 1) = P("y");
  m(0, 2) = P("x + y");
  m(1, 0) = Exact(1);
  m(1, 1) = Exact(2);
  m(1, 2) = Exact(3);
  m(2, 0) = P("2*x");
  m(2, 1) = P("2*y");
  m(2, 2) = P("2*x + 2*y");
  EXPECT_EQ(rank(m), 2u);
  const auto ker = kernel(m);
  ASSERT_EQ(ker.size(), 1u);
  const auto mv = m * ker[0];
  for (const auto& x : mv) EXPECT_TRUE(x.is_zero());
  Matrix<Exact> a(2, 2);
  a(0, 0) = P("x");
  a(0, 1) = Exact(1);
  a(1, 0) = Exact(1);
  a(1, 1) = P("y");
  const auto ai = inverse(a);
  const auto id = a * ai;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(id(i, j), Exact(i == j ? 1 : 0));
  EXPECT_EQ(determinant(a), P("x*y - 1"));
  EXPECT_THROW(inverse(m), SingularSystem);
}

TEST(Linalg, PrefersConstantPivots) {
  // A constant pivot avoids introducing denominators in the kernel basis.
  Matrix<Exact> m(1, 2);
  m(0, 0) = P("x");
  m(0, 1) = Exact(1);
  const auto ker = kernel(m);
  ASSERT_EQ(ker.size(), 1u);
  EXPECT_TRUE(ker[0][0].is_polynomial());
  EXPECT_TRUE(ker[0][1].is_polynomial());
}
