#pragma once

// Guards and interval covers shared by the pw{...} and sd{...} languages.

#include <string>
#include <vector>

#include "parser.hpp"
#include "symop/env.hpp"

namespace symop::detail {

struct Guard {
  ExtExpr lo = ExtExpr::neg_inf(), hi = ExtExpr::pos_inf();
  bool lo_closed = false, hi_closed = false;
  std::size_t offset = 0;
};

Ordering compare_ext(const AssumptionEnv& env, const ExtExpr& a, const ExtExpr& b);

// rel ("&" rel)?, with chains such as "a < x <= b" accepted.
Guard parse_guard(Parser& p, const AssumptionEnv& env);

// Breakpoints induced by the guards and which guard covers each open cell and
// each breakpoint (-1 when none).
struct Cover {
  std::vector<Expr> breakpoints;
  std::vector<int> cell;   // breakpoints.size() + 1
  std::vector<int> point;  // breakpoints.size()
};

// GapInGuards when a cell is uncovered, OverlappingGuards when a cell or a
// point is claimed twice.
Cover cover(const std::vector<Guard>& guards, const AssumptionEnv& env);

// Sorted distinct breakpoints under env (UndecidableComparison otherwise).
std::vector<Expr> sort_unique(std::vector<Expr> xs, const AssumptionEnv& env);

// Renders "head{ guard -> text ; ... }". attach[k] joins breakpoint k to the
// cell on its left (-1) or right (+1); 0 prints it as its own branch.
std::string render_branches(const std::string& head, const std::string& var, const std::vector<Expr>& bps,
                            const std::vector<std::string>& cells, const std::vector<std::string>& points,
                            const std::vector<int>& attach);

}  // namespace symop::detail
