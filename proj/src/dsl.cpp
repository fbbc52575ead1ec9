#include "dsl.hpp"

#include <algorithm>

#include "symop/simplify.hpp"

namespace symop::detail {

Ordering compare_ext(const AssumptionEnv& env, const ExtExpr& a, const ExtExpr& b) {
  if (a.kind() == b.kind() && !a.is_finite()) return Ordering::Equal;
  if (a.is_neg_inf() || b.is_pos_inf()) return Ordering::Less;
  if (a.is_pos_inf() || b.is_neg_inf()) return Ordering::Greater;
  return env.compare(a.expr(), b.expr());
}

namespace {

bool at_cmp(const Parser& p) {
  return p.at_sym("<") || p.at_sym("<=") || p.at_sym(">") || p.at_sym(">=") || p.at_sym("=");
}

// lhs cmp rhs as a bound on x.
Guard relation(const Expr& lhs, const std::string& cmp, const Expr& rhs, std::size_t offset,
               const AssumptionEnv& env) {
  auto lin = as_linear(simplify(Expr::sub(lhs, rhs)));
  if (!lin || lin->first.is_zero())
    throw SyntaxError(offset, {"relation in x"}, "guard must be an affine relation involving x");
  int s = env.sign(lin->first);
  Expr bound = simplify(Expr::div(Expr::neg(lin->second), lin->first));
  std::string op = cmp;
  if (s < 0) {
    if (op == "<") op = ">";
    else if (op == "<=") op = ">=";
    else if (op == ">") op = "<";
    else if (op == ">=") op = "<=";
  }
  Guard g;
  g.offset = offset;
  if (op == "<" || op == "<=") {
    g.hi = bound;
    g.hi_closed = op == "<=";
  } else if (op == ">" || op == ">=") {
    g.lo = bound;
    g.lo_closed = op == ">=";
  } else {
    g.lo = g.hi = bound;
    g.lo_closed = g.hi_closed = true;
  }
  return g;
}

Guard intersect(const Guard& a, const Guard& b, const AssumptionEnv& env) {
  Guard g = a;
  Ordering lo = compare_ext(env, a.lo, b.lo);
  if (lo == Ordering::Undecidable)
    throw Error(ErrorCode::UndecidableComparison, "cannot order guard bounds " + a.lo.str() + " and " + b.lo.str());
  if (lo == Ordering::Less) {
    g.lo = b.lo;
    g.lo_closed = b.lo_closed;
  } else if (lo == Ordering::Equal) {
    g.lo_closed = a.lo_closed && b.lo_closed;
  }
  Ordering hi = compare_ext(env, a.hi, b.hi);
  if (hi == Ordering::Undecidable)
    throw Error(ErrorCode::UndecidableComparison, "cannot order guard bounds " + a.hi.str() + " and " + b.hi.str());
  if (hi == Ordering::Greater) {
    g.hi = b.hi;
    g.hi_closed = b.hi_closed;
  } else if (hi == Ordering::Equal) {
    g.hi_closed = a.hi_closed && b.hi_closed;
  }
  return g;
}

}  // namespace

Guard parse_guard(Parser& p, const AssumptionEnv& env) {
  std::size_t offset = p.peek().offset;
  Guard g;
  bool any = false;
  for (;;) {
    Expr lhs = p.expr();
    if (!at_cmp(p)) p.fail("expected a comparison", {"<", "<=", "=", ">=", ">"});
    while (at_cmp(p)) {
      std::string op = p.next().text;
      std::size_t at = p.peek().offset;
      Expr rhs = p.expr();
      Guard r = relation(lhs, op, rhs, at, env);
      g = any ? intersect(g, r, env) : r;
      any = true;
      lhs = rhs;
    }
    if (!p.at_sym("&")) break;
    p.next();
  }
  g.offset = offset;
  return g;
}

std::vector<Expr> sort_unique(std::vector<Expr> xs, const AssumptionEnv& env) {
  std::vector<Expr> out;
  for (auto& x : xs) {
    x = simplify(x);
    std::size_t pos = 0;
    bool dup = false;
    for (; pos < out.size(); ++pos) {
      Ordering o = env.order(x, out[pos]);
      if (o == Ordering::Equal) {
        dup = true;
        break;
      }
      if (o == Ordering::Less) break;
    }
    if (!dup) out.insert(out.begin() + static_cast<long>(pos), x);
  }
  return out;
}

Cover cover(const std::vector<Guard>& guards, const AssumptionEnv& env) {
  std::vector<Expr> ends;
  for (const auto& g : guards) {
    if (g.lo.is_finite()) ends.push_back(g.lo.expr());
    if (g.hi.is_finite()) ends.push_back(g.hi.expr());
  }
  Cover c;
  c.breakpoints = sort_unique(ends, env);
  const auto& bp = c.breakpoints;
  std::size_t n = bp.size();
  auto le = [&](const ExtExpr& a, const ExtExpr& b) {
    Ordering o = compare_ext(env, a, b);
    if (o == Ordering::Undecidable)
      throw Error(ErrorCode::UndecidableComparison, "cannot order " + a.str() + " and " + b.str());
    return o != Ordering::Greater;
  };
  for (std::size_t k = 0; k <= n; ++k) {
    ExtExpr lo = k == 0 ? ExtExpr::neg_inf() : ExtExpr(bp[k - 1]);
    ExtExpr hi = k == n ? ExtExpr::pos_inf() : ExtExpr(bp[k]);
    int owner = -1;
    for (std::size_t i = 0; i < guards.size(); ++i) {
      const Guard& g = guards[i];
      bool empty = compare_ext(env, g.lo, g.hi) == Ordering::Equal;
      if (empty || !le(g.lo, lo) || !le(hi, g.hi)) continue;
      if (owner >= 0)
        throw Error(ErrorCode::OverlappingGuards, "two branches cover (" + lo.str() + ", " + hi.str() + ")");
      owner = static_cast<int>(i);
    }
    if (owner < 0) throw Error(ErrorCode::GapInGuards, "no branch covers (" + lo.str() + ", " + hi.str() + ")");
    c.cell.push_back(owner);
  }
  for (std::size_t k = 0; k < n; ++k) {
    ExtExpr b(bp[k]);
    int owner = -1;
    for (std::size_t i = 0; i < guards.size(); ++i) {
      const Guard& g = guards[i];
      Ordering lo = compare_ext(env, g.lo, b), hi = compare_ext(env, b, g.hi);
      bool in = (lo == Ordering::Less || (lo == Ordering::Equal && g.lo_closed)) &&
                (hi == Ordering::Less || (hi == Ordering::Equal && g.hi_closed));
      if (!in) continue;
      if (owner >= 0) throw Error(ErrorCode::OverlappingGuards, "two branches cover x = " + b.str());
      owner = static_cast<int>(i);
    }
    c.point.push_back(owner);
  }
  return c;
}

std::string render_branches(const std::string& head, const std::string& var, const std::vector<Expr>& bps,
                            const std::vector<std::string>& cells, const std::vector<std::string>& points,
                            const std::vector<int>& attach) {
  const std::size_t n = bps.size();
  std::vector<std::string> out;
  for (std::size_t i = 0; i <= n; ++i) {
    if (i > 0 && attach[i - 1] == 0) out.push_back(var + " = " + bps[i - 1].str(var) + " -> " + points[i - 1]);
    std::string guard;
    bool lo_closed = i > 0 && attach[i - 1] == 1;
    bool hi_closed = i < n && attach[i] == -1;
    if (i == 0)
      guard = var + (hi_closed ? " <= " : " < ") + bps[0].str(var);
    else if (i == n)
      guard = var + (lo_closed ? " >= " : " > ") + bps[n - 1].str(var);
    else
      guard = bps[i - 1].str(var) + (lo_closed ? " <= " : " < ") + var + (hi_closed ? " <= " : " < ") +
              bps[i].str(var);
    out.push_back(guard + " -> " + cells[i]);
  }
  std::string s = head + "{ ";
  for (std::size_t i = 0; i < out.size(); ++i) s += (i ? " ; " : "") + out[i];
  return s + " }";
}

}  // namespace symop::detail
