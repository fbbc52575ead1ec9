#include <gtest/gtest.h>

#include <cmath>

#include "corpus.hpp"
#include "symop/risk.hpp"

using namespace symop;
using namespace symop::testing;

namespace {

const char* const kExp = "pw{ x < 0 -> 0 ; x >= 0 -> 1 - exp(-x) }";
const char* const kUniform = "pw{ x < 0 -> 0 ; 0 <= x <= 1 -> x ; x > 1 -> 1 }";
const char* const kPointMass = "sd{ x < 0 -> {0} ; x = 0 -> [0, 1] ; x > 0 -> {1} }";

Expr q(long n, long d) { return Expr::rational(Rational(n, d)); }

double num(const ExtExpr& e) {
  EXPECT_TRUE(e.is_finite());
  return e.is_finite() ? eval_double(e.expr(), 0, {}) : NAN;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

DistributionSpec dist(const char* s) { return cdf_distribution(s, {}); }

}  // namespace

TEST(Superexpectation, Exponential) {
  PiecewiseFunction e = superexpectation(dist(kExp));
  for (double x : linspace(-3, 6, 37)) EXPECT_NEAR(eval_pwf_double(e, x, {}), x <= 0 ? 1 : x + std::exp(-x), 1e-14) << x;
}

TEST(Superexpectation, Uniform) {
  PiecewiseFunction e = superexpectation(dist(kUniform));
  EXPECT_NEAR(eval_pwf_double(e, 0.5, {}), 0.625, 1e-15);
  EXPECT_NEAR(eval_pwf_double(e, -1, {}), 0.5, 1e-15);
  EXPECT_NEAR(eval_pwf_double(e, 2, {}), 2, 1e-15);
}

TEST(Superexpectation, PointMass) {
  PiecewiseFunction e = superexpectation(dist(kPointMass));
  for (double x : linspace(-2, 2, 17)) EXPECT_EQ(eval_pwf_double(e, x, {}), std::max(x, 0.0)) << x;
}

TEST(Superdistribution, Examples) {
  MonotoneOperator s = superdistribution(dist(kExp));
  NumericSet a = eval_op_double(s, 1, {});
  EXPECT_NEAR(a.lo, 1 - std::exp(-1.0), 1e-15);
  EXPECT_EQ(a.lo, a.hi);
  NumericSet z = eval_op_double(s, -1, {});
  EXPECT_EQ(z.lo, 0);
  EXPECT_EQ(z.hi, 0);

  NumericSet m = eval_op_double(superdistribution(dist(kPointMass)), 0, {});
  EXPECT_EQ(m.lo, 0);
  EXPECT_EQ(m.hi, 1);
}

TEST(Superquantile, Examples) {
  EXPECT_NEAR(num(superquantile(dist(kExp), q(1, 2))), 1 - std::log(0.5), 1e-14);
  EXPECT_NEAR(num(superquantile(dist(kUniform), q(1, 2))), 0.75, 1e-15);
}

TEST(Quantile, Examples) {
  Expr p = simplify(Expr::integer(1) - Expr::exp(Expr::integer(-1)));
  EXPECT_NEAR(num(quantile(dist(kExp), p)), 1, 1e-14);
  EXPECT_EQ(num(quantile(dist(kPointMass), q(1, 2))), 0);
  EXPECT_NEAR(num(quantile(dist(kUniform), q(1, 4))), 0.25, 1e-15);
}

TEST(Quantile, FromQuantileFunction) {
  DistributionSpec d = quantile_distribution("-ln(1 - p)", {});
  EXPECT_NEAR(num(quantile(d, q(1, 2))), std::log(2.0), 1e-14);
  EXPECT_NEAR(num(superquantile(d, q(1, 2))), 1 + std::log(2.0), 1e-12);
}

TEST(Cvar, Examples) {
  EXPECT_NEAR(num(cvar(dist(kExp), q(95, 100))), 1 + std::log(20.0), 1e-13);
  EXPECT_NEAR(num(cvar(dist(kUniform), q(9, 10))), 0.95, 1e-15);
  EXPECT_EQ(code_of([] { cvar(dist(kExp), Expr::integer(1)); }), ErrorCode::POutOfRange);
  EXPECT_EQ(code_of([] { cvar(dist(kExp), q(-1, 2)); }), ErrorCode::POutOfRange);
}

TEST(Distribution, Errors) {
  EXPECT_EQ(code_of([] { dist("pw{ x < 0 -> 0 ; x >= 0 -> x }"); }), ErrorCode::InvalidDistribution);
  EXPECT_EQ(code_of([] { dist("pw{ x < 0 -> 0 ; 0 <= x <= 1 -> x/2 ; x > 1 -> 1/2 }"); }),
            ErrorCode::InvalidDistribution);
  EXPECT_EQ(code_of([] { superexpectation(dist("pw{ x < 1 -> 0 ; x >= 1 -> 1 - 1/x }")); }),
            ErrorCode::NoFirstMoment);
}

TEST(RiskProperties, SuperquantileDominatesQuantile) {
  for (const char* s : {kExp, kUniform, kPointMass}) {
    DistributionSpec d = dist(s);
    double prev_q = -INFINITY, prev_sq = -INFINITY;
    for (double p : linspace(0.05, 0.95, 19)) {
      Expr pe = Expr::rational(Rational(static_cast<long>(std::lround(p * 100)), 100));
      double qv = num(quantile(d, pe)), sq = num(superquantile(d, pe));
      EXPECT_GE(sq, qv - 1e-12) << s << " at " << p;
      EXPECT_GE(qv, prev_q - 1e-12) << s << " at " << p;
      EXPECT_GE(sq, prev_sq - 1e-12) << s << " at " << p;
      prev_q = qv;
      prev_sq = sq;
    }
  }
}

TEST(RiskProperties, CvarApproachesSupremum) {
  Expr p = Expr::rational(Rational(1) - Rational(1, 1000000));
  EXPECT_NEAR(num(cvar(dist(kUniform), p)), 1, 1e-3);
  EXPECT_NEAR(num(cvar(dist(kPointMass), p)), 0, 1e-12);
}
