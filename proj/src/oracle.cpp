#include "symop/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace symop::oracle {

double grid_conjugate(const PiecewiseFunction& f, double y, double lo, double hi, std::size_t n,
                      const NumericParams& params) {
  if (n < 2 || !(lo < hi)) throw Error(ErrorCode::Domain, "grid needs n >= 2 and lo < hi");
  double best = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    double v = eval_pwf_double(f, x, params);
    if (std::isinf(v)) continue;
    best = std::max(best, y * x - v);
  }
  if (std::isinf(best)) throw Error(ErrorCode::WindowOutsideDomain, "f is +inf on the whole grid");
  return best;
}

double numeric_prox(const PiecewiseFunction& f, double x, double lambda, double tol, const NumericParams& params) {
  using LD = long double;
  auto fv = [&](LD u) { return eval_pwf_double(f, static_cast<double>(u), params); };
  // Sign of phi(c) - phi(d), formed as a difference so the quadratic parts
  // cancel exactly.
  auto less = [&](LD c, LD d) {
    double a = fv(c), b = fv(d);
    if (std::isinf(a) || std::isinf(b)) return !std::isinf(a) && std::isinf(b);
    LD diff = (LD(a) - LD(b)) + (c - d) * (c + d - 2 * LD(x)) / (2 * LD(lambda));
    return diff < 0;
  };

  LD u0 = x;
  if (std::isinf(fv(u0))) {
    bool found = false;
    for (int k = -20; k < 64 && !found; ++k) {
      for (int s : {-1, 1}) {
        LD u = LD(x) + s * std::ldexp(1.0L, k);
        if (!std::isinf(fv(u))) {
          u0 = u;
          found = true;
          break;
        }
      }
    }
    if (!found) throw Error(ErrorCode::MaxIterations, "no point of the domain found");
  }

  auto expand = [&](LD dir) {
    LD step = 1, next = u0;
    for (int it = 0; it < 200; ++it, step *= 2) {
      next = u0 + dir * step;
      if (less(u0, next) || std::isinf(fv(next))) break;
    }
    return next;
  };
  LD lo = expand(-1), hi = expand(1);
  const LD g = (std::sqrt(5.0L) - 1) / 2;
  // best: a finite point kept inside the bracket, used when both probes are +inf.
  LD best = u0;
  for (int it = 0; it < 400 && hi - lo > LD(tol) / 16; ++it) {
    // Probes sit on the double grid so f and the quadratic see the same point.
    LD c = static_cast<double>(hi - g * (hi - lo)), d = static_cast<double>(lo + g * (hi - lo));
    if (!(c < d)) break;
    bool ci = std::isinf(fv(c)), di = std::isinf(fv(d));
    if (ci && di) {
      if (best < c)
        hi = c;
      else if (best > d)
        lo = d;
      else
        lo = c, hi = d;
      continue;
    }
    if (less(c, d)) {
      hi = d;
      if (less(c, best) || std::isinf(fv(best)) || best > hi) best = c;
    } else {
      lo = c;
      if (less(d, best) || std::isinf(fv(best)) || best < lo) best = d;
    }
  }
  LD mid = (lo + hi) / 2;
  if (!std::isinf(fv(mid))) return static_cast<double>(mid);
  return static_cast<double>(best);
}

std::vector<GraphPoint> sample_graph(const MonotoneOperator& t, std::size_t per_cell, const NumericParams& params,
                                     double lo, double hi) {
  std::vector<double> bps;
  for (const auto& b : t.breakpoints) bps.push_back(eval_double(b, 0, params));
  if (!bps.empty()) {
    lo = std::min(lo, bps.front() - 10);
    hi = std::max(hi, bps.back() + 10);
  }
  std::vector<GraphPoint> out;
  auto push_cell = [&](double a, double b) {
    for (std::size_t j = 1; j <= per_cell; ++j) {
      double x = a + (b - a) * static_cast<double>(j) / static_cast<double>(per_cell + 1);
      NumericSet s = eval_op_double(t, x, params);
      if (s.empty()) return;
      out.push_back({x, s.lo});
    }
  };
  double prev = lo;
  for (std::size_t k = 0; k <= bps.size(); ++k) {
    double next = k < bps.size() ? bps[k] : hi;
    push_cell(prev, next);
    if (k == bps.size()) break;
    NumericSet s = eval_op_double(t, bps[k], params);
    if (!s.empty()) {
      std::vector<double> us;
      if (std::isfinite(s.lo)) us.push_back(s.lo);
      if (std::isfinite(s.hi)) us.push_back(s.hi);
      if (std::isfinite(s.lo) && std::isfinite(s.hi)) us.push_back((s.lo + s.hi) / 2);
      if (std::isfinite(s.lo) && !std::isfinite(s.hi)) us.insert(us.end(), {s.lo + 1, s.lo + 10});
      if (!std::isfinite(s.lo) && std::isfinite(s.hi)) us.insert(us.end(), {s.hi - 1, s.hi - 10});
      if (us.empty()) us = {-10, 0, 10};
      std::sort(us.begin(), us.end());
      us.erase(std::unique(us.begin(), us.end()), us.end());
      for (double u : us) out.push_back({bps[k], u});
    }
    prev = next;
  }
  return out;
}

MonotonicityReport monotonicity_check(const MonotoneOperator& t, std::size_t n_pairs, const NumericParams& params,
                                      std::uint64_t seed) {
  std::vector<GraphPoint> pts = sample_graph(t, 16, params);
  MonotonicityReport rep;
  rep.min_product = INFINITY;
  if (pts.size() < 2) {
    rep.min_product = 0;
    return rep;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  for (std::size_t i = 0; i < n_pairs; ++i) {
    const GraphPoint& a = pts[pick(rng)];
    const GraphPoint& b = pts[pick(rng)];
    double p = (a.x - b.x) * (a.u - b.u);
    if (p < rep.min_product) {
      rep.min_product = p;
      rep.a = a;
      rep.b = b;
    }
  }
  rep.pairs = n_pairs;
  return rep;
}

}  // namespace symop::oracle
