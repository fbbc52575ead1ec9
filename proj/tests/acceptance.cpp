#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "symop/conv.hpp"
#include "symop/oracle.hpp"
#include "symop/penalty.hpp"
#include "symop/risk.hpp"

using namespace symop;
using namespace symop::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

bool same(const Expr& a, const Expr& b) { return simplify(a - b).is_zero(); }

double point_value(const MonotoneOperator& t, double x, const NumericParams& np = {}) {
  NumericSet s = eval_op_double(t, x, np);
  if (s.empty() || s.lo != s.hi) return NAN;
  return s.lo;
}

// Up to n graph points of t, spread over all cells and breakpoints.
std::vector<oracle::GraphPoint> graph_points(const MonotoneOperator& t, std::size_t n) {
  std::size_t cells = t.pieces.size();
  std::vector<oracle::GraphPoint> all = oracle::sample_graph(t, n / cells + 1);
  if (all.size() <= n) return all;
  std::vector<oracle::GraphPoint> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(all[i * all.size() / n]);
  return out;
}

// Largest distance of a sampled graph point of a from the graph of b, or
// +inf when some point has no value in b at all.
double graph_gap(const MonotoneOperator& a, const MonotoneOperator& b, std::size_t n, double tol, std::size_t& misses) {
  double worst = 0;
  for (const auto& p : graph_points(a, n)) {
    NumericSet s = eval_op_double(b, p.x, {});
    if (s.empty()) {
      ++misses;
      worst = INFINITY;
      continue;
    }
    double d = std::max({0.0, s.lo - p.u, p.u - s.hi});
    double scale = 1 + std::fabs(p.u);
    if (d > tol * scale) ++misses;
    worst = std::max(worst, d / scale);
  }
  return worst;
}

Outcome soft_threshold() {
  AssumptionEnv env;
  env.assume("0 < l");
  Expr l = Expr::param("l"), y = Expr::var();
  MonotoneOperator p = prox(parse_pwf("abs(x)", env), l);
  bool shape = p.breakpoints.size() == 2 && same(p.breakpoints[0], -l) && same(p.breakpoints[1], l) &&
               p.pieces.size() == 3 && same(p.pieces[0].body, y + l) && same(p.pieces[1].body, Expr()) &&
               same(p.pieces[2].body, y - l) && p.pieces[0].kind == OpPiece::Kind::StrictMonotone &&
               p.pieces[1].kind == OpPiece::Kind::Constant && p.pieces[2].kind == OpPiece::Kind::StrictMonotone &&
               p.values[0] == SetValue::point(Expr()) && p.values[1] == SetValue::point(Expr());
  PiecewiseFunction f1 = parse_pwf("abs(x)", AssumptionEnv{});
  double worst = 0;
  for (double x : linspace(-5, 5, 1000)) {
    double e = std::fabs(point_value(p, x, {{"l", 1}}) - oracle::numeric_prox(f1, x, 1, 1e-12));
    worst = std::isnan(e) ? INFINITY : std::max(worst, e);
  }
  return {shape && worst <= 1e-9, std::string(shape ? "branches {y+l},{0},{y-l} at -l, l" : "wrong branch structure") +
                                      "; max oracle error " + sci(worst) + " at 1000 points (tol 1e-9)"};
}

Outcome projection() {
  AssumptionEnv env;
  env.assume("a < b");
  Expr a = Expr::param("a"), b = Expr::param("b"), y = Expr::var();
  MonotoneOperator p = prox(parse_pwf("pw{ x < a -> inf ; a <= x <= b -> 0 ; x > b -> inf }", env), Expr::integer(1));
  bool shape = p.breakpoints.size() == 2 && same(p.breakpoints[0], a) && same(p.breakpoints[1], b) &&
               p.pieces.size() == 3 && same(p.pieces[0].body, a) && same(p.pieces[1].body, y) &&
               same(p.pieces[2].body, b) && p.values[0] == SetValue::point(a) && p.values[1] == SetValue::point(b);
  PiecewiseFunction box = parse_pwf("pw{ x < -1 -> inf ; -1 <= x <= 2 -> 0 ; x > 2 -> inf }", AssumptionEnv{});
  double worst = 0;
  for (double x : linspace(-5, 5, 1000)) {
    double e = std::fabs(point_value(p, x, {{"a", -1}, {"b", 2}}) - oracle::numeric_prox(box, x, 1, 1e-12));
    worst = std::isnan(e) ? INFINITY : std::max(worst, e);
  }
  return {shape && worst <= 1e-9, std::string(shape ? "branches {a},{y},{b}" : "wrong branch structure") +
                                      "; max oracle error " + sci(worst) + " at 1000 points (tol 1e-9)"};
}

Outcome hard_threshold_penalty() {
  AssumptionEnv env;
  env.assume("0 < alpha");
  PiecewiseFunction f = recover_penalty(parse_operator(
      "sd{ x < -alpha -> {x}; x = -alpha -> [-alpha, 0]; -alpha < x < alpha -> {0}; x = alpha -> [0, alpha]; "
      "x > alpha -> {x} }",
      env));
  MonotoneOperator h1 =
      parse_operator("sd{ x < -1 -> {x}; x = -1 -> [-1, 0]; -1 < x < 1 -> {0}; x = 1 -> [0, 1]; x > 1 -> {x} }", {});
  PiecewiseFunction f1 = recover_penalty(h1);
  double worst = 0;
  auto expected = [](double y) { return std::fabs(y) > 1 ? 0.0 : -(1 - std::fabs(y)) * (1 - std::fabs(y)) / 2; };
  std::vector<double> xs = linspace(-3, 3, 1000);
  xs.insert(xs.end(), {-1, 0, 1});
  for (double y : xs) {
    worst = std::max(worst, std::fabs(eval_pwf_double(f, y, {{"alpha", 1}}) - expected(y)));
    worst = std::max(worst, std::fabs(eval_pwf_double(f1, y, {}) - expected(y)));
  }
  PenaltyReport r = verify_penalty(h1, f1);
  bool ok = worst <= 1e-12 && r.pass && r.max_violation < 1e-9;
  return {ok, "max |f - (-(1-|y|)^2/2 on [-1,1], 0 outside)| " + sci(worst) + " (tol 1e-12); verify_penalty " +
                  (r.pass ? "pass" : "fail") + " with max violation " + sci(r.max_violation) + " over " +
                  std::to_string(r.samples) + " graph points"};
}

Outcome exponential_risk() {
  AssumptionEnv env;
  env.assume("0 < l");
  ExactParams one = {{"l", 1}};
  NumericParams onen = {{"l", 1.0}};
  DistributionSpec d = cdf_distribution("pw{ x < 0 -> 0 ; x >= 0 -> 1 - exp(-l*x) }", env);
  PiecewiseFunction e = superexpectation(d);
  double worst_e = 0;
  for (double x : linspace(-5, 5, 1000)) {
    double want = x <= 0 ? 1 : x + std::exp(-x);
    worst_e = std::max(worst_e, std::fabs(eval_pwf_double(e, x, onen) - want));
  }
  PiecewiseFunction ec = superexpectation_conjugate(d);
  double conj = eval_pwf(ec, ExtReal(Num(Rational(1, 2))), one).to_double();
  // -(p - 1)(ln(1 - p) - 1) at p = 1/2, i.e. 0.5 (ln 0.5 - 1) = -0.846574.
  double conj_err = std::fabs(conj - 0.5 * (std::log(0.5) - 1));
  ExtExpr sq = superquantile(d, Expr::rational(Rational(1, 2)));
  double sq_err = std::fabs(eval(sq.expr(), ExtReal(0), one).to_double() - (1 - std::log(0.5)));
  ExtExpr q = quantile(d, parse_expr("1 - exp(-1)"));
  double q_err = std::fabs(eval(q.expr(), ExtReal(0), one).to_double() - 1);
  bool ok = worst_e <= 1e-12 && conj_err <= 1e-12 && sq_err <= 1e-12 && q_err <= 1e-10;
  return {ok, "E error " + sci(worst_e) + ", E*(1/2) error " + sci(conj_err) + ", superquantile(1/2) error " +
                  sci(sq_err) + ", quantile(1-1/e) error " + sci(q_err)};
}

Outcome biconjugation() {
  double worst = 0;
  std::string where;
  for (const auto& c : corpus()) {
    PiecewiseFunction f = corpus_function(c);
    PiecewiseFunction g = biconjugate(f);
    for (double x : interior_points(f, 100)) {
      double e = std::fabs(eval_pwf_double(g, x, {}) - eval_pwf_double(f, x, {}));
      if (!(e <= worst)) {
        worst = std::isnan(e) ? INFINITY : e;
        where = c.name;
      }
    }
  }
  return {worst <= 1e-9, std::to_string(corpus().size()) + " functions x 100 points, max |f** - f| " + sci(worst) +
                             (where.empty() ? "" : " (" + where + ")") + " (tol 1e-9)"};
}

Outcome graph_duality() {
  double worst = 0;
  std::size_t misses = 0, points = 0;
  for (const auto& c : corpus()) {
    PiecewiseFunction f = corpus_function(c);
    MonotoneOperator inv = invert(subdifferential(f));
    MonotoneOperator dconj = subdifferential(conjugate(f));
    worst = std::max({worst, graph_gap(inv, dconj, 500, 1e-10, misses), graph_gap(dconj, inv, 500, 1e-10, misses)});
    points += graph_points(inv, 500).size() + graph_points(dconj, 500).size();
  }
  return {misses == 0, std::to_string(points) + " graph points in both directions, max relative gap " + sci(worst) +
                           ", " + std::to_string(misses) + " outside tol 1e-10"};
}

Outcome closure_suite() {
  std::mt19937_64 rng(0xC0FFEE);
  const auto& c = corpus();
  std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
  std::uniform_int_distribution<int> pick_scale(0, 2);
  std::uniform_real_distribution<double> point(-10, 10);
  const Rational scales[] = {Rational(1, 2), Rational(2), Rational(3)};
  double min_product = INFINITY, worst_firm = -INFINITY;
  std::size_t ops = 0;
  for (int k = 0; k < 20; ++k) {
    const auto& ea = c[pick(rng)];
    const auto& eb = c[pick(rng)];
    Expr lam = Expr::rational(scales[pick_scale(rng)]);
    MonotoneOperator a = subdifferential(corpus_function(ea));
    MonotoneOperator b = subdifferential(corpus_function(eb));
    MonotoneOperator sum = add(a, b);
    std::vector<MonotoneOperator> outs = {sum, scale(a, lam), invert(a)};
    std::vector<MonotoneOperator> resolvents = {resolvent(sum, Expr::integer(1)), resolvent(b, lam)};
    outs.insert(outs.end(), resolvents.begin(), resolvents.end());
    for (const auto& t : outs) {
      min_product = std::min(min_product, oracle::monotonicity_check(t, 500).min_product);
      ++ops;
    }
    for (const auto& r : resolvents) {
      for (int i = 0; i < 500; ++i) {
        double x = point(rng), y = point(rng);
        double rx = point_value(r, x), ry = point_value(r, y);
        double excess = (rx - ry) * (rx - ry) - (x - y) * (rx - ry);
        worst_firm = std::max(worst_firm, std::isnan(excess) ? INFINITY : excess);
      }
    }
  }
  bool ok = min_product >= -1e-12 && worst_firm <= 1e-10;
  return {ok, std::to_string(ops) + " operators from 20 random pairs: min (x-y)(u-v) " + sci(min_product) +
                  "; 20000 resolvent pairs: max firm-nonexpansiveness excess " + sci(worst_firm)};
}

Outcome moreau() {
  double worst = 0;
  std::string where;
  for (const auto& c : corpus()) {
    PiecewiseFunction f = corpus_function(c);
    MonotoneOperator p = prox(f, Expr::integer(1));
    MonotoneOperator q = prox(conjugate(f), Expr::integer(1));
    for (double x : linspace(-5, 5, 100)) {
      double e = std::fabs(point_value(p, x) + point_value(q, x) - x);
      if (!(e <= worst)) {
        worst = std::isnan(e) ? INFINITY : e;
        where = c.name;
      }
    }
  }
  return {worst <= 1e-9, std::to_string(corpus().size()) + " functions x 100 points, max |prox f + prox f* - x| " +
                             sci(worst) + (where.empty() ? "" : " (" + where + ")") + " (tol 1e-9)"};
}

Outcome inversion_route() {
  double worst = 0;
  std::size_t misses = 0;
  for (const auto& c : corpus()) {
    MonotoneOperator t = subdifferential(corpus_function(c));
    MonotoneOperator direct = invert(t);
    MonotoneOperator route = subdifferential(conjugate(integ(t)));
    worst = std::max({worst, graph_gap(direct, route, 500, 1e-9, misses), graph_gap(route, direct, 500, 1e-9, misses)});
  }
  return {misses == 0, std::to_string(corpus().size()) + " subdifferentials, max relative graph gap " + sci(worst) +
                           ", " + std::to_string(misses) + " points outside tol 1e-9"};
}

Outcome oracle_agreement() {
  const double lo = -10, hi = 10;
  const std::size_t n = 100000;
  const double h = (hi - lo) / (n - 1);
  std::size_t checks = 0, fails = 0;
  double worst_ratio = 0;
  for (const char* name : {"abs", "half_square", "quartic", "exp", "huber"}) {
    auto it = std::find_if(corpus().begin(), corpus().end(), [&](const CorpusEntry& e) { return e.name == name; });
    PiecewiseFunction f = corpus_function(*it);
    PiecewiseFunction g = conjugate(f);
    MonotoneOperator s = subdifferential(f);
    std::vector<oracle::GraphPoint> pts;
    for (const auto& p : oracle::sample_graph(s, 40, {}, -9, 9))
      if (std::fabs(p.x) <= 9) pts.push_back(p);
    for (int k = 0; k < 20; ++k) {
      const auto& p = pts[k * pts.size() / 20];
      double sym = eval_pwf_double(g, p.u, {});
      double grid = oracle::grid_conjugate(f, p.u, lo, hi, n);
      double slope = 0;
      for (double x : {p.x - h, p.x + h}) {
        NumericSet v = eval_op_double(s, x, {});
        if (!v.empty()) slope = std::max({slope, std::fabs(v.lo), std::fabs(v.hi)});
      }
      double bound = std::max(1e-6, h * (std::fabs(p.u) + slope));
      double err = sym - grid;
      ++checks;
      if (!(err >= -1e-12 * (1 + std::fabs(sym)) && err <= bound)) ++fails;
      worst_ratio = std::max(worst_ratio, std::fabs(err) / bound);
    }
  }
  return {fails == 0 && checks == 100, std::to_string(checks) + " (function, y) pairs, grid [-10,10] x 1e5; max error/bound " +
                                           sci(worst_ratio) + ", " + std::to_string(fails) + " failures"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "soft threshold", soft_threshold},
      {2, "projection", projection},
      {3, "hard-threshold penalty", hard_threshold_penalty},
      {4, "exponential risk pipeline", exponential_risk},
      {5, "biconjugation", biconjugation},
      {6, "duality of graphs", graph_duality},
      {7, "closure suite", closure_suite},
      {8, "Moreau decomposition", moreau},
      {9, "inversion route equivalence", inversion_route},
      {10, "oracle agreement", oracle_agreement},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d: %s  %s: %s [%.2fs]\n", c.id, o.pass ? "PASS" : "FAIL", c.title, o.detail.c_str(),
                secs);
    if (!o.pass) ++failed;
  }
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
