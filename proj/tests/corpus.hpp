#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "symop/conv.hpp"
#include "symop/monop.hpp"
#include "symop/pwf.hpp"

namespace symop::testing {

struct CorpusEntry {
  std::string name;
  std::string text;
};

// Every piece kind: affine, strictly convex, infinite, kinks, flats,
// bounded and half-line domains, affine tails.
inline const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> c = {
      {"abs", "abs(x)"},
      {"half_square", "x^2/2"},
      {"quartic", "x^4"},
      {"box", "pw{ x < -1 -> inf ; -1 <= x <= 2 -> 0 ; x > 2 -> inf }"},
      {"log_barrier", "pw{ x <= 0 -> inf ; x > 0 -> -ln(x) }"},
      {"exp", "exp(x)"},
      {"three_kinks", "pw{ x < -1 -> -2*x - 1 ; -1 <= x < 0 -> -x ; 0 <= x < 2 -> x/2 ; x >= 2 -> 2*x - 3 }"},
      {"relu", "pw{ x < 0 -> 0 ; x >= 0 -> x }"},
      {"huber", "pw{ x < -1 -> -x - 1/2 ; -1 <= x <= 1 -> x^2/2 ; x > 1 -> x - 1/2 }"},
      {"exp_affine_tail", "pw{ x < 0 -> exp(x) ; x >= 0 -> x + 1 }"},
      {"half_line_square", "pw{ x < 0 -> inf ; x >= 0 -> x^2 }"},
  };
  return c;
}

inline PiecewiseFunction corpus_function(const CorpusEntry& e) { return parse_pwf(e.text, AssumptionEnv{}); }

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return v;
}

// n points strictly inside dom f, clipped to [-10, 10].
inline std::vector<double> interior_points(const PiecewiseFunction& f, int n) {
  Interval d = domain(f);
  double lo = d.lo.is_finite() ? eval_double(d.lo.expr(), 0) : -10;
  double hi = d.hi.is_finite() ? eval_double(d.hi.expr(), 0) : 10;
  lo = std::max(lo, -10.0);
  hi = std::min(hi, 10.0);
  std::vector<double> v;
  for (int i = 1; i <= n; ++i) v.push_back(lo + (hi - lo) * i / (n + 1));
  return v;
}

inline bool member(const NumericSet& s, double u, double tol) {
  return !s.empty() && u >= s.lo - tol * (1 + std::fabs(s.lo)) && u <= s.hi + tol * (1 + std::fabs(s.hi));
}

}  // namespace symop::testing
