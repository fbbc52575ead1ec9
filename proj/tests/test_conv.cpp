#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "corpus.hpp"
#include "symop/conv.hpp"
#include "symop/oracle.hpp"

using namespace symop;
using namespace symop::testing;

namespace {

double at(const PiecewiseFunction& f, double x, const NumericParams& np = {}) { return eval_pwf_double(f, x, np); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST(Integ, AbsFromSubdifferential) {
  MonotoneOperator t = parse_operator("sd{ x < 0 -> {-1} ; x = 0 -> [-1, 1] ; x > 0 -> {1} }", {});
  PiecewiseFunction f = integ(t, Expr(), ExtExpr(Expr()));
  for (double x : linspace(-4, 4, 33)) EXPECT_DOUBLE_EQ(at(f, x), std::fabs(x));
}

TEST(Integ, SuperexpectationOfExponential) {
  AssumptionEnv env;
  env.assume("0 < l");
  MonotoneOperator t = parse_operator("sd{ x < 0 -> {0} ; x >= 0 -> {1 - exp(-l*x)} }", env);
  PiecewiseFunction e = integ(t, Expr(), ExtExpr(Expr::integer(1)));
  for (double x : linspace(-3, 5, 33)) {
    double want = x <= 0 ? 1 : x + std::exp(-x);
    EXPECT_NEAR(at(e, x, {{"l", 1}}), want, 1e-14) << x;
  }
}

TEST(Integ, Errors) {
  EXPECT_EQ(code_of([] { integ(parse_operator("sd{ x < 0 -> empty ; x >= 0 -> empty }", {})); }),
            ErrorCode::EmptyOperator);
  EXPECT_EQ(code_of([] {
              integ(parse_operator("sd{ x < 0 -> {0} ; 0 <= x <= 1 -> empty ; x > 1 -> {1} }", {}));
            }),
            ErrorCode::GapInDomain);
}

TEST(Integ, SingletonDomainIsIndicator) {
  MonotoneOperator t = parse_operator("sd{ x < 1 -> empty ; x = 1 -> all ; x > 1 -> empty }", {});
  PiecewiseFunction f = integ(t, Expr::integer(1), ExtExpr(Expr::integer(2)));
  EXPECT_EQ(at(f, 1), 2);
  EXPECT_TRUE(std::isinf(at(f, 0.5)));
  EXPECT_TRUE(std::isinf(at(f, 1.5)));
}

TEST(Conjugate, AbsIsIndicator) {
  PiecewiseFunction g = conjugate(parse_pwf("abs(x)", {}));
  for (double y : linspace(-1, 1, 21)) EXPECT_EQ(at(g, y), 0) << y;
  EXPECT_TRUE(std::isinf(at(g, -1.01)));
  EXPECT_TRUE(std::isinf(at(g, 1.01)));
}

TEST(Conjugate, Superexpectation) {
  PiecewiseFunction e = parse_pwf("pw{ x <= 0 -> 1 ; x > 0 -> x + exp(-x) }", {});
  PiecewiseFunction g = conjugate(e);
  EXPECT_TRUE(std::isinf(at(g, -0.1)));
  EXPECT_DOUBLE_EQ(at(g, 0), -1);
  for (double p : linspace(0.05, 0.95, 19)) EXPECT_NEAR(at(g, p), -(p - 1) * (std::log(1 - p) - 1), 1e-14) << p;
  EXPECT_DOUBLE_EQ(at(g, 1), 0);
  EXPECT_TRUE(std::isinf(at(g, 1.1)));
}

TEST(Conjugate, QuarticAgainstGrid) {
  PiecewiseFunction f = parse_pwf("x^4", {});
  double sym = at(conjugate(f), 1);
  EXPECT_NEAR(sym, 0.75 * std::pow(0.25, 1.0 / 3), 1e-14);
  EXPECT_NEAR(sym, 0.472470, 1e-6);
  double grid = oracle::grid_conjugate(f, 1, -2, 2, 1000000);
  EXPECT_LE(grid, sym + 1e-15);
  EXPECT_NEAR(grid, sym, 1e-11);
}

TEST(Biconjugate, Examples) {
  for (const char* s : {"x^2/2", "abs(x)", "pw{ x < -1 -> inf ; -1 <= x <= 2 -> 0 ; x > 2 -> inf }"}) {
    PiecewiseFunction f = parse_pwf(s, {});
    PiecewiseFunction g = biconjugate(f);
    for (double x : linspace(-3, 3, 61)) {
      double a = at(f, x), b = at(g, x);
      if (std::isinf(a))
        EXPECT_TRUE(std::isinf(b)) << s << " at " << x;
      else
        EXPECT_NEAR(a, b, 1e-12) << s << " at " << x;
    }
  }
}

TEST(Biconjugate, SymbolicIndicator) {
  AssumptionEnv env;
  env.assume("a < b");
  PiecewiseFunction g = biconjugate(parse_pwf("pw{ x < a -> inf ; a <= x <= b -> 0 ; x > b -> inf }", env));
  NumericParams np = {{"a", -1}, {"b", 2}};
  for (double x : linspace(-1, 2, 13)) EXPECT_EQ(at(g, x, np), 0);
  EXPECT_TRUE(std::isinf(at(g, -1.5, np)));
  EXPECT_TRUE(std::isinf(at(g, 2.5, np)));
}

TEST(ConvProperties, FenchelYoung) {
  std::mt19937_64 rng(0xC0FFEE);
  for (const auto& c : corpus()) {
    PiecewiseFunction f = corpus_function(c);
    PiecewiseFunction g = conjugate(f);
    std::vector<double> xs = interior_points(f, 200), ys = interior_points(g, 200);
    std::uniform_int_distribution<std::size_t> px(0, xs.size() - 1), py(0, ys.size() - 1);
    for (int i = 0; i < 500; ++i) {
      double x = xs[px(rng)], y = ys[py(rng)];
      EXPECT_GE(at(f, x) + at(g, y), x * y - 1e-10) << c.name;
    }
    MonotoneOperator s = subdifferential(f);
    for (const auto& p : oracle::sample_graph(s, 10)) {
      double gap = at(f, p.x) + at(g, p.u) - p.x * p.u;
      EXPECT_NEAR(gap, 0, 1e-9 * (1 + std::fabs(p.x * p.u))) << c.name << " at (" << p.x << ", " << p.u << ")";
    }
  }
}

TEST(ConvProperties, BiconjugateKeepsKinds) {
  for (const auto& c : corpus()) {
    PiecewiseFunction f = corpus_function(c);
    PiecewiseFunction g = biconjugate(f);
    ASSERT_EQ(f.breakpoints.size(), g.breakpoints.size()) << c.name;
    for (std::size_t k = 0; k < f.breakpoints.size(); ++k)
      EXPECT_TRUE(simplify(f.breakpoints[k] - g.breakpoints[k]).is_zero()) << c.name;
    for (std::size_t i = 0; i < f.pieces.size(); ++i) EXPECT_EQ(f.pieces[i].kind, g.pieces[i].kind) << c.name;
  }
}
