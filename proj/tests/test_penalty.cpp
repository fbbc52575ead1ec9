#include <gtest/gtest.h>

#include <cmath>

#include "corpus.hpp"
#include "symop/oracle.hpp"
#include "symop/penalty.hpp"

using namespace symop;
using namespace symop::testing;

namespace {

const char* const kHardAlpha =
    "sd{ x < -alpha -> {x}; x = -alpha -> [-alpha, 0]; -alpha < x < alpha -> {0}; x = alpha -> [0, alpha]; "
    "x > alpha -> {x} }";
const char* const kHard1 = "sd{ x < -1 -> {x}; -1 < x < 1 -> {0}; x > 1 -> {x} }";

double hard_penalty(double y, double alpha) {
  return std::fabs(y) > alpha ? 0.0 : -(alpha - std::fabs(y)) * (alpha - std::fabs(y)) / 2;
}

}  // namespace

TEST(RecoverPenalty, HardThresholdSevenBranches) {
  AssumptionEnv env;
  env.assume("0 < alpha");
  PiecewiseFunction f = recover_penalty(parse_operator(kHardAlpha, env));
  EXPECT_TRUE(f.weakly_convex);
  EXPECT_EQ(f.breakpoints.size(), 3u);
  for (double alpha : {0.5, 1.0, 3.0})
    for (double y : linspace(-5, 5, 201))
      EXPECT_NEAR(eval_pwf_double(f, y, {{"alpha", alpha}}), hard_penalty(y, alpha), 1e-12) << alpha << " " << y;
}

TEST(RecoverPenalty, Identity) {
  PiecewiseFunction f = recover_penalty(identity_operator({}));
  for (double y : linspace(-5, 5, 21)) EXPECT_EQ(eval_pwf_double(f, y, {}), 0);
}

TEST(RecoverPenalty, Projection) {
  MonotoneOperator t = parse_operator("sd{ x <= -1 -> {-1}; -1 < x < 2 -> {x}; x >= 2 -> {2} }", {});
  PiecewiseFunction f = recover_penalty(t);
  for (double y : linspace(-1, 2, 13)) EXPECT_EQ(eval_pwf_double(f, y, {}), 0);
  EXPECT_TRUE(std::isinf(eval_pwf_double(f, -1.5, {})));
  EXPECT_TRUE(std::isinf(eval_pwf_double(f, 2.5, {})));
  EXPECT_TRUE(verify_penalty(t, f).pass);
}

TEST(RecoverPenalty, EmptyOperator) {
  try {
    recover_penalty(parse_operator("sd{ x < 0 -> empty ; x >= 0 -> empty }", {}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyOperator);
  }
}

TEST(VerifyPenalty, Examples) {
  MonotoneOperator h1 = parse_operator(kHard1, {});
  PenaltyReport r = verify_penalty(h1, recover_penalty(h1));
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.max_violation, 1e-9);
  EXPECT_GE(r.samples, 450u);

  PiecewiseFunction zero = parse_pwf("0", {});
  EXPECT_TRUE(verify_penalty(identity_operator({}), zero).pass);

  PenaltyReport bad = verify_penalty(h1, zero);
  EXPECT_FALSE(bad.pass);
  EXPECT_GT(bad.max_violation, 1e-9);
  EXPECT_LT(std::fabs(bad.witness_x), 1 + 1e-12);
}

TEST(PenaltyProperties, CorpusOperatorsPass) {
  for (const auto& c : corpus()) {
    PiecewiseFunction g = corpus_function(c);
    for (const auto& t : {subdifferential(g), prox(g, Expr::integer(1))}) {
      PiecewiseFunction f = recover_penalty(t);
      PenaltyReport r = verify_penalty(t, f);
      EXPECT_TRUE(r.pass) << c.name << ": violation " << r.max_violation << " at (" << r.witness_x << ", "
                          << r.witness_u << ")";
      PiecewiseFunction convexified = add_expr(f, parse_expr("x^2/2"));
      convexified.weakly_convex = false;
      EXPECT_NO_THROW(validate(convexified)) << c.name;
    }
  }
}

TEST(PenaltyProperties, ProxRoundTrip) {
  for (const auto& c : corpus()) {
    PiecewiseFunction g = corpus_function(c);
    MonotoneOperator p = prox(g, Expr::integer(1));
    PiecewiseFunction f = recover_penalty(p);
    for (double x : linspace(-5, 5, 41)) {
      double want = eval_op_double(p, x, {}).lo;
      EXPECT_NEAR(oracle::numeric_prox(f, x, 1), want, 1e-7) << c.name << " at " << x;
    }
  }
}

TEST(PenaltyProperties, HardThresholdPenaltyIsNotConvex) {
  PiecewiseFunction f = recover_penalty(parse_operator(kHard1, {}));
  EXPECT_GT(eval_pwf_double(f, 0, {}), -1);
  EXPECT_GT(eval_pwf_double(f, 0.5, {}), (eval_pwf_double(f, 0, {}) + eval_pwf_double(f, 1, {})) / 2);
}
