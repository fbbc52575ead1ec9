#include <gtest/gtest.h>

#include <cmath>

#include "corpus.hpp"
#include "symop/oracle.hpp"
#include "symop/sep.hpp"

using namespace symop;
using namespace symop::testing;

namespace {

std::vector<ExtReal> point(std::initializer_list<Rational> xs) {
  std::vector<ExtReal> out;
  for (const auto& x : xs) out.emplace_back(Num(x));
  return out;
}

void expect_point(const SetValue& v, double want) {
  ASSERT_TRUE(v.is_point()) << v.str();
  EXPECT_NEAR(eval_double(v.lo().expr(), 0, {}), want, 1e-14);
}

}  // namespace

TEST(SeparableConjugate, AbsGivesBoxIndicators) {
  SeparableFunction g = separable_conjugate(parse_separable("abs(x) ;; abs(x)", {}));
  ASSERT_EQ(g.coords.size(), 2u);
  for (const auto& c : g.coords) {
    for (double y : linspace(-1, 1, 11)) EXPECT_EQ(eval_pwf_double(c, y, {}), 0);
    EXPECT_TRUE(std::isinf(eval_pwf_double(c, 1.5, {})));
    EXPECT_TRUE(std::isinf(eval_pwf_double(c, -1.5, {})));
  }
}

TEST(SeparableConjugate, MixedCoordinates) {
  SeparableFunction g = separable_conjugate(parse_separable("x^2/2 ;; x^4", {}));
  ASSERT_EQ(g.coords.size(), 2u);
  for (double y : linspace(-3, 3, 13)) EXPECT_NEAR(eval_pwf_double(g.coords[0], y, {}), y * y / 2, 1e-14);
  EXPECT_NEAR(eval_pwf_double(g.coords[1], 1, {}), 0.472470, 1e-6);
}

TEST(SeparableConjugate, Empty) { EXPECT_TRUE(separable_conjugate(SeparableFunction{}).coords.empty()); }

TEST(SeparableProx, L1) {
  SeparableFunction f = parse_separable("abs(x) ;; abs(x)", {});
  std::vector<SetValue> v = separable_prox(f, Expr::integer(1), point({2, Rational(-1, 2)}));
  ASSERT_EQ(v.size(), 2u);
  expect_point(v[0], 1);
  expect_point(v[1], 0);
}

TEST(SeparableProx, BoxProjection) {
  const char* box = "pw{ x < 0 -> inf ; 0 <= x <= 1 -> 0 ; x > 1 -> inf }";
  SeparableFunction f = parse_separable(std::string(box) + " ;; " + box, {});
  std::vector<SetValue> v = separable_prox(f, Expr::integer(1), point({2, -1}));
  ASSERT_EQ(v.size(), 2u);
  expect_point(v[0], 1);
  expect_point(v[1], 0);
}

TEST(SeparableProx, OneCoordinateMatchesProx) {
  for (const auto& c : corpus()) {
    SeparableFunction f{{corpus_function(c)}};
    MonotoneOperator p = prox(f.coords[0], Expr::integer(1));
    for (long k = -4; k <= 4; ++k) {
      std::vector<SetValue> v = separable_prox(f, Expr::integer(1), point({Rational(k, 2)}));
      ASSERT_EQ(v.size(), 1u);
      expect_point(v[0], eval_op_double(p, k / 2.0, {}).lo);
    }
  }
}

TEST(SeparableProx, AgreesWithNumericProx) {
  SeparableFunction f = parse_separable("abs(x) ;; x^2/2 ;; exp(x)", {});
  std::vector<SetValue> v = separable_prox(f, Expr::integer(2), point({3, -1, 0}));
  ASSERT_EQ(v.size(), 3u);
  for (std::size_t j = 0; j < 3; ++j) {
    double x = j == 0 ? 3 : j == 1 ? -1 : 0;
    ASSERT_TRUE(v[j].is_point());
    EXPECT_NEAR(eval_double(v[j].lo().expr(), 0, {}), oracle::numeric_prox(f.coords[j], x, 2), 1e-7);
  }
}

TEST(Separable, Errors) {
  SeparableFunction f = parse_separable("abs(x) ;; abs(x)", {});
  try {
    separable_prox(f, Expr::integer(1), point({1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  ParseOptions strict;
  strict.params = std::set<std::string>{};
  EXPECT_THROW(parse_separable("abs(x) ;; x + y", {}, strict), SyntaxError);
}
