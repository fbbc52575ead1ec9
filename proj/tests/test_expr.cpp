#include <gtest/gtest.h>

#include <cmath>

#include "corpus.hpp"
#include "symop/calculus.hpp"
#include "symop/env.hpp"
#include "symop/expr.hpp"
#include "symop/limit.hpp"
#include "symop/simplify.hpp"

using namespace symop;
using symop::testing::linspace;

namespace {

Expr p(const char* s) { return parse_expr(s); }
bool same(const Expr& a, const Expr& b) { return simplify(a - b).is_zero(); }
double ev(const Expr& e, double x, const NumericParams& np = {}) { return eval_double(e, x, np); }

const char* const kExprCorpus[] = {"x^2/2", "x^4", "exp(x)", "exp(-2*x) + x", "x*ln(x)", "-ln(x)",
                                   "sqrt(x)", "x^3 + x", "1/x", "(x + 1)^(3/2)", "1 - exp(-x)", "x*exp(x)"};

}  // namespace

TEST(Parse, Structure) {
  Expr a = p("abs(x)");
  EXPECT_EQ(a.kind(), Expr::Kind::Abs);
  EXPECT_EQ(a.arg(0).kind(), Expr::Kind::Var);

  Expr f = p("1 - exp(-l*x)");
  ASSERT_EQ(f.kind(), Expr::Kind::Sub);
  EXPECT_TRUE(f.arg(0).is_one());
  const Expr& e = f.arg(1);
  ASSERT_EQ(e.kind(), Expr::Kind::Exp);
  EXPECT_EQ(e.arg(0).kind(), Expr::Kind::Neg);
  const Expr& m = e.arg(0).arg(0);
  ASSERT_EQ(m.kind(), Expr::Kind::Mul);
  EXPECT_EQ(m.arg(0).kind(), Expr::Kind::Param);
  EXPECT_EQ(m.arg(0).name(), "l");
  EXPECT_EQ(m.arg(1).kind(), Expr::Kind::Var);
}

TEST(Parse, SyntaxErrorOffset) {
  try {
    p("x +");
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 3u);
    EXPECT_EQ(e.code(), ErrorCode::Syntax);
    EXPECT_FALSE(e.expected().empty());
  }
}

TEST(Parse, UndeclaredIdentifierRejected) {
  ParseOptions o;
  o.params = std::set<std::string>{"l"};
  EXPECT_NO_THROW(parse_expr("l*x", o));
  EXPECT_THROW(parse_expr("x + y", o), SyntaxError);
}

TEST(Parse, DecimalsAreExact) {
  Expr e = p("0.95");
  ASSERT_TRUE(e.is_number());
  EXPECT_TRUE(e.value().is_exact());
  EXPECT_EQ(e.value().rational(), Rational(19, 20));
}

TEST(Parse, RoundTrip) {
  for (const char* s : kExprCorpus) {
    Expr e = p(s);
    EXPECT_EQ(parse_expr(e.str()), e) << s << " printed as " << e.str();
  }
}

TEST(Parse, ImplicitAndIntegralRoundTrip) {
  InverseResult r = invert_monotone(p("x + exp(x)"), ExtExpr::neg_inf(), ExtExpr::pos_inf(), {});
  Expr box = Expr::implicit(p("x - 1/x"), p("2*x"), Expr(), std::nullopt);
  Expr area = Expr::integral(p("x^2"), Expr::integer(1), p("x + 1"));
  for (const Expr& e : {r.g, box, area, Expr::add(box, area)}) {
    Expr back = parse_expr(e.str());
    EXPECT_EQ(back, e) << e.str();
    EXPECT_EQ(back.str(), e.str());
  }
  EXPECT_NEAR(ev(parse_expr(box.str()), 1), 1 + std::sqrt(2.0), 1e-12);
  EXPECT_THROW(parse_expr("inverse[t -> t on (0, inf)"), SyntaxError);
}

TEST(Eval, Examples) {
  EXPECT_EQ(eval(p("abs(x)"), ExtReal(-3)).numstr(), "3");
  ExtReal v = eval(p("1-exp(-l*x)"), ExtReal(0), {{"l", 1}});
  EXPECT_EQ(v.to_double(), 0.0);
  try {
    eval(p("ln(x)"), ExtReal(-1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Domain);
  }
}

TEST(Eval, ExactArithmetic) {
  ExtReal v = eval(p("x^2/3 - abs(x)"), ExtReal(Num(Rational(1, 2))));
  ASSERT_TRUE(v.value().is_exact());
  EXPECT_EQ(v.value().rational(), Rational(-5, 12));
}

TEST(Eval, UnboundParameter) {
  try {
    eval_double(p("a*x"), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnboundParameter);
  }
}

TEST(Eval, FractionalPowerOfNegative) { EXPECT_THROW(eval(p("sqrt(x)"), ExtReal(-4)), Error); }

TEST(Differentiate, Examples) {
  EXPECT_TRUE(same(differentiate(p("x^2/2")), p("x")));
  EXPECT_TRUE(same(differentiate(p("exp(x)")), p("exp(x)")));
  Expr e = differentiate(p("(l*x + exp(-l*x))/l"));
  for (double x : {-1.0, 0.0, 0.7, 3.0})
    EXPECT_NEAR(ev(e, x, {{"l", 2}}), 1 - std::exp(-2 * x), 1e-14);
}

TEST(Differentiate, MatchesCentralDifferences) {
  for (const char* s : kExprCorpus) {
    Expr e = p(s), d = differentiate(e);
    for (double x : linspace(0.1, 5, 100)) {
      const double h = 1e-6;
      double fd = (ev(e, x + h) - ev(e, x - h)) / (2 * h);
      double v = ev(d, x);
      EXPECT_LE(std::fabs(v - fd), 1e-6 * (1 + std::fabs(v))) << s << " at " << x;
    }
  }
}

TEST(Antiderivative, Examples) {
  EXPECT_TRUE(same(antiderivative(p("x")), p("x^2/2")));
  Expr a = antiderivative(p("1 - exp(-l*x)"));
  for (double x : {0.0, 1.0, 2.5})
    EXPECT_NEAR(ev(a, x, {{"l", 3}}) - ev(a, 0, {{"l", 3}}), x + std::exp(-3 * x) / 3 - 1.0 / 3, 1e-14);
  try {
    antiderivative(p("exp(x^2)"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonElementary);
  }
}

TEST(Antiderivative, DifferentiatesBack) {
  for (const char* s : kExprCorpus) {
    Expr e = p(s);
    Expr a;
    try {
      a = antiderivative(e, IntervalHint{Expr::integer(1), nullptr});
    } catch (const Error&) {
      continue;
    }
    Expr d = differentiate(a);
    for (double x : linspace(0.1, 5, 100))
      EXPECT_LE(std::fabs(ev(d, x) - ev(e, x)), 1e-12 * (1 + std::fabs(ev(e, x)))) << s << " at " << x;
  }
}

TEST(InvertMonotone, Cube) {
  InverseResult r = invert_monotone(p("x^3"), ExtExpr::neg_inf(), ExtExpr::pos_inf(), {});
  EXPECT_EQ(r.kind, InverseResult::Kind::Symbolic);
  EXPECT_TRUE(r.image_lo.is_neg_inf());
  EXPECT_TRUE(r.image_hi.is_pos_inf());
  for (double y : linspace(-8, 8, 100)) EXPECT_NEAR(std::pow(ev(r.g, y), 3), y, 1e-10 * (1 + std::fabs(y)));
}

TEST(InvertMonotone, ExponentialCdf) {
  InverseResult r = invert_monotone(p("1 - exp(-x)"), ExtExpr(Expr()), ExtExpr::pos_inf(), {});
  EXPECT_EQ(r.kind, InverseResult::Kind::Symbolic);
  EXPECT_TRUE(same(r.image_lo.expr(), Expr()));
  EXPECT_TRUE(same(r.image_hi.expr(), Expr::integer(1)));
  EXPECT_TRUE(same(r.g, p("-ln(1 - x)")));
}

TEST(InvertMonotone, ImplicitConverges) {
  InverseResult r = invert_monotone(p("x + exp(x)"), ExtExpr::neg_inf(), ExtExpr::pos_inf(), {});
  EXPECT_EQ(r.kind, InverseResult::Kind::Implicit);
  for (double y : linspace(-5, 20, 100)) {
    double t = ev(r.g, y);
    EXPECT_LE(std::fabs(t + std::exp(t) - y), 1e-10 * (1 + std::fabs(y)));
  }
}

TEST(InvertMonotone, RejectsNonMonotone) {
  try {
    invert_monotone(p("x^2"), ExtExpr::neg_inf(), ExtExpr::pos_inf(), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotMonotone);
  }
}

TEST(Env, Compare) {
  AssumptionEnv env;
  env.assume("0 < a");
  EXPECT_EQ(env.compare(p("-a"), p("a")), Ordering::Less);
  EXPECT_EQ(AssumptionEnv{}.compare(p("1/2"), p("1/3")), Ordering::Greater);
  EXPECT_EQ(AssumptionEnv{}.compare(p("a"), Expr()), Ordering::Undecidable);
}

TEST(Env, Inconsistent) {
  AssumptionEnv env;
  env.assume("a < b");
  try {
    env.assume("b < a");
    env.check_consistent();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InconsistentEnv);
  }
}

TEST(Env, AntisymmetricAndTransitive) {
  AssumptionEnv env;
  env.assume("0 < a");
  env.assume("a < b");
  env.assume("b <= 3");
  std::vector<Expr> terms = {p("0"), p("a"), p("b"), p("3"), p("a + b"), p("-a"), p("2*b"), p("7"), p("b - a")};
  auto flip = [](Ordering o) {
    return o == Ordering::Less ? Ordering::Greater : o == Ordering::Greater ? Ordering::Less : o;
  };
  for (const auto& x : terms)
    for (const auto& y : terms) {
      EXPECT_EQ(env.compare(x, y), flip(env.compare(y, x))) << x.str() << " vs " << y.str();
      for (const auto& z : terms) {
        if (env.compare(x, y) == Ordering::Less && env.compare(y, z) == Ordering::Less) {
          EXPECT_EQ(env.compare(x, z), Ordering::Less) << x.str() << " < " << y.str() << " < " << z.str();
        }
      }
    }
}

TEST(Limit, Basics) {
  AssumptionEnv env;
  ExtExpr a = limit(p("x*exp(-x)"), LimitPoint::pos_inf(), env);
  ASSERT_TRUE(a.is_finite());
  EXPECT_TRUE(a.expr().is_zero());
  EXPECT_TRUE(limit(p("-ln(x)"), LimitPoint::right(Expr()), env).is_pos_inf());
  ExtExpr b = limit(p("x*ln(x)"), LimitPoint::right(Expr()), env);
  ASSERT_TRUE(b.is_finite());
  EXPECT_TRUE(b.expr().is_zero());
}
