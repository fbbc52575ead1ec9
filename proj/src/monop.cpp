#include "symop/monop.hpp"

#include <cmath>

#include "dsl.hpp"
#include "symop/calculus.hpp"
#include "symop/limit.hpp"
#include "symop/simplify.hpp"

namespace symop {

using detail::compare_ext;

SetValue SetValue::interval(const ExtExpr& lo, const ExtExpr& hi) {
  SetValue v;
  if (lo.is_pos_inf() || hi.is_neg_inf()) return v;
  v.empty_ = false;
  v.lo_ = lo.is_finite() ? ExtExpr(simplify(lo.expr())) : lo;
  v.hi_ = hi.is_finite() ? ExtExpr(simplify(hi.expr())) : hi;
  return v;
}

std::string SetValue::str(std::string_view var) const {
  if (empty_) return "empty";
  if (is_all()) return "all";
  if (is_point()) return "{" + lo_.str(var) + "}";
  return "[" + lo_.str(var) + ", " + hi_.str(var) + "]";
}

const char* kind_name(OpPiece::Kind k) {
  switch (k) {
    case OpPiece::Kind::Empty: return "Empty";
    case OpPiece::Kind::Constant: return "Constant";
    case OpPiece::Kind::StrictMonotone: return "StrictMonotone";
  }
  return "?";
}

ExtExpr MonotoneOperator::piece_limit(std::size_t i, bool right_end) const {
  const OpPiece& p = pieces[i];
  if (p.is_empty()) throw Error(ErrorCode::Internal, "limit of an empty piece");
  if (p.kind == OpPiece::Kind::Constant) return p.body;
  if (right_end) {
    if (i == breakpoints.size()) return limit(p.body, LimitPoint::pos_inf(), env);
    return limit(p.body, LimitPoint::left(breakpoints[i]), env);
  }
  if (i == 0) return limit(p.body, LimitPoint::neg_inf(), env);
  return limit(p.body, LimitPoint::right(breakpoints[i - 1]), env);
}

namespace {

ExtExpr cell_lo(const std::vector<Expr>& bps, std::size_t i) {
  return i == 0 ? ExtExpr::neg_inf() : ExtExpr(bps[i - 1]);
}
ExtExpr cell_hi(const std::vector<Expr>& bps, std::size_t i) {
  return i == bps.size() ? ExtExpr::pos_inf() : ExtExpr(bps[i]);
}

Ordering decided(const AssumptionEnv& env, const ExtExpr& a, const ExtExpr& b) {
  Ordering o = compare_ext(env, a, b);
  if (o == Ordering::Undecidable)
    throw Error(ErrorCode::UndecidableComparison, "cannot compare " + a.str() + " and " + b.str());
  return o;
}

ExtExpr ext_add(const ExtExpr& a, const ExtExpr& b) {
  if (!a.is_finite()) return a;
  if (!b.is_finite()) return b;
  return ExtExpr(simplify(Expr::add(a.expr(), b.expr())));
}

SetValue minkowski(const SetValue& a, const SetValue& b) {
  if (a.is_empty() || b.is_empty()) return SetValue::empty();
  return SetValue::interval(ext_add(a.lo(), b.lo()), ext_add(a.hi(), b.hi()));
}

std::set<std::string> all_params(const MonotoneOperator& t) {
  std::set<std::string> out;
  for (const auto& b : t.breakpoints) out.merge(b.params());
  for (const auto& p : t.pieces)
    if (!p.is_empty()) out.merge(p.body.params());
  return out;
}

void check_monotone(MonotoneOperator& t) {
  const AssumptionEnv& env = t.env;
  const std::size_t n = t.breakpoints.size();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (env.order(t.breakpoints[k], t.breakpoints[k + 1]) != Ordering::Less)
      throw Error(ErrorCode::Domain, "breakpoints must be strictly increasing");
  }
  NumericParams np = to_numeric(env.witness(all_params(t)));
  ExtExpr prev = ExtExpr::neg_inf();
  std::string prev_where = "-inf";
  auto step = [&](const ExtExpr& lower, const ExtExpr& upper, const std::string& where) {
    if (decided(env, prev, lower) == Ordering::Greater)
      throw Error(ErrorCode::NotMonotone, "graph decreases between " + prev_where + " and " + where);
    prev = upper;
    prev_where = where;
  };
  for (std::size_t i = 0; i <= n; ++i) {
    OpPiece& p = t.pieces[i];
    ExtExpr lo = cell_lo(t.breakpoints, i), hi = cell_hi(t.breakpoints, i);
    std::string where = "(" + lo.str() + ", " + hi.str() + ")";
    if (!p.is_empty()) {
      if (p.kind == OpPiece::Kind::StrictMonotone) {
        Expr d;
        bool have_d = true;
        try {
          d = differentiate(p.body);
        } catch (const Error&) {
          have_d = false;
        }
        if (have_d) {
          auto [a, b] = sample_window(lo, hi, np);
          for (double x : chebyshev_points(a, b, 33)) {
            double v;
            try {
              v = eval_double(d, x, np);
            } catch (const Error&) {
              continue;
            }
            if (v < -1e-12 * (1 + std::fabs(v)))
              throw Error(ErrorCode::NotMonotone, p.body.str(t.var) + " decreases near " + t.var + " = " + std::to_string(x));
          }
        }
      }
      step(t.piece_limit(i, false), t.piece_limit(i, true), where);
    }
    if (i < n && !t.values[i].is_empty()) {
      const SetValue& v = t.values[i];
      if (decided(env, v.lo(), v.hi()) == Ordering::Greater)
        throw Error(ErrorCode::Domain, "interval value with lo > hi at " + t.breakpoints[i].str());
      step(v.lo(), v.hi(), t.var + " = " + t.breakpoints[i].str());
    }
  }
}

}  // namespace

MonotoneOperator make_operator(std::vector<Expr> breakpoints, std::vector<OpPiece> pieces,
                               std::vector<std::optional<SetValue>> values, const AssumptionEnv& env) {
  MonotoneOperator t;
  t.env = env;
  if (pieces.size() != breakpoints.size() + 1 || values.size() != breakpoints.size())
    throw Error(ErrorCode::Internal, "piece/breakpoint count mismatch");
  for (auto& b : breakpoints) b = simplify(b);
  for (auto& p : pieces) {
    if (p.is_empty()) continue;
    p.body = simplify(p.body);
    p.kind = p.body.has_var() ? OpPiece::Kind::StrictMonotone : OpPiece::Kind::Constant;
    if (p.body.has_numeric()) t.numeric = true;
  }
  t.breakpoints = std::move(breakpoints);
  t.pieces = std::move(pieces);
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k]) {
      t.values.push_back(*values[k]);
      continue;
    }
    bool l = !t.pieces[k].is_empty(), r = !t.pieces[k + 1].is_empty();
    if (l && r)
      t.values.push_back(SetValue::interval(t.piece_limit(k, true), t.piece_limit(k + 1, false)));
    else if (l || r) {
      ExtExpr v = l ? t.piece_limit(k, true) : t.piece_limit(k + 1, false);
      t.values.push_back(v.is_finite() ? SetValue::point(v.expr()) : SetValue::empty());
    } else {
      t.values.push_back(SetValue::empty());
    }
  }
  for (std::size_t k = 0; k < t.breakpoints.size();) {
    const OpPiece& a = t.pieces[k];
    const OpPiece& b = t.pieces[k + 1];
    const SetValue& v = t.values[k];
    bool same = false;
    if (a.is_empty() && b.is_empty()) {
      same = v.is_empty();
    } else if (!a.is_empty() && !b.is_empty() && v.is_point() && same_function(a.body, b.body)) {
      ExtExpr L = t.piece_limit(k, true);
      same = L.is_finite() && compare_ext(env, L, v.lo()) == Ordering::Equal;
    }
    if (same) {
      t.breakpoints.erase(t.breakpoints.begin() + static_cast<long>(k));
      t.values.erase(t.values.begin() + static_cast<long>(k));
      t.pieces.erase(t.pieces.begin() + static_cast<long>(k) + 1);
    } else {
      ++k;
    }
  }
  check_monotone(t);
  return t;
}

// ------------------------------------------------------------------ parsing

namespace {

struct SetSpec {
  enum class Kind { List, Interval, All, Empty } kind = Kind::Empty;
  std::vector<Expr> items;
  ExtExpr lo, hi;
};

ExtExpr parse_bound(detail::Parser& p) {
  if (p.at_ident("inf")) {
    p.next();
    return ExtExpr::pos_inf();
  }
  if (p.at_sym("-") && p.peek(1).kind == detail::Tok::Ident && p.peek(1).text == "inf") {
    p.next();
    p.next();
    return ExtExpr::neg_inf();
  }
  return ExtExpr(p.expr());
}

SetSpec parse_setval(detail::Parser& p) {
  SetSpec s;
  if (p.at_sym("{")) {
    p.next();
    s.kind = SetSpec::Kind::List;
    s.items.push_back(p.expr());
    while (p.at_sym(",")) {
      p.next();
      s.items.push_back(p.expr());
    }
    p.expect_sym("}");
  } else if (p.at_sym("[")) {
    p.next();
    s.kind = SetSpec::Kind::Interval;
    s.lo = parse_bound(p);
    p.expect_sym(",");
    s.hi = parse_bound(p);
    p.expect_sym("]");
  } else if (p.at_ident("all")) {
    p.next();
    s.kind = SetSpec::Kind::All;
  } else if (p.at_ident("empty")) {
    p.next();
    s.kind = SetSpec::Kind::Empty;
  } else {
    // a bare expression is a single value
    s.kind = SetSpec::Kind::List;
    s.items.push_back(p.expr());
  }
  return s;
}

SetValue set_at(const SetSpec& s, const Expr& b, const AssumptionEnv& env) {
  switch (s.kind) {
    case SetSpec::Kind::Empty: return SetValue::empty();
    case SetSpec::Kind::All: return SetValue::all();
    case SetSpec::Kind::Interval: {
      auto at = [&](const ExtExpr& e) { return e.is_finite() ? ExtExpr(simplify(substitute(e.expr(), b))) : e; };
      return SetValue::interval(at(s.lo), at(s.hi));
    }
    case SetSpec::Kind::List: {
      Expr lo = simplify(substitute(s.items[0], b)), hi = lo;
      for (std::size_t i = 1; i < s.items.size(); ++i) {
        Expr v = simplify(substitute(s.items[i], b));
        if (env.order(v, lo) == Ordering::Less) lo = v;
        if (env.order(v, hi) == Ordering::Greater) hi = v;
      }
      return SetValue::interval(lo, hi);
    }
  }
  return SetValue::empty();
}

}  // namespace

static MonotoneOperator parse_operator_body(std::string_view text, const AssumptionEnv& env, const ParseOptions& options) {
  detail::Parser p(text, options);
  if (!(p.at_ident("sd") && p.peek(1).kind == detail::Tok::Sym && p.peek(1).text == "{")) {
    Expr e = p.expr();
    p.expect_end();
    return make_operator({}, {OpPiece::value(e)}, {}, env);
  }
  p.next();
  p.next();
  std::vector<detail::Guard> guards;
  std::vector<SetSpec> sets;
  std::vector<std::size_t> offsets;
  for (;;) {
    guards.push_back(detail::parse_guard(p, env));
    p.expect_sym("->");
    offsets.push_back(p.peek().offset);
    sets.push_back(parse_setval(p));
    if (p.at_sym(";")) {
      p.next();
      if (p.at_sym("}")) break;
      continue;
    }
    break;
  }
  p.expect_sym("}");
  p.expect_end();
  detail::Cover c = detail::cover(guards, env);
  std::vector<OpPiece> pieces;
  for (int owner : c.cell) {
    const SetSpec& s = sets[static_cast<std::size_t>(owner)];
    if (s.kind == SetSpec::Kind::Empty) {
      pieces.push_back(OpPiece::empty());
    } else if (s.kind == SetSpec::Kind::List && s.items.size() == 1) {
      pieces.push_back(OpPiece::value(s.items[0]));
    } else {
      throw SyntaxError(offsets[static_cast<std::size_t>(owner)], {"{expr}", "empty"},
                        "only single values or empty are allowed on an open interval");
    }
  }
  std::vector<std::optional<SetValue>> values;
  for (std::size_t k = 0; k < c.point.size(); ++k) {
    int owner = c.point[k];
    if (owner < 0)
      values.push_back(std::nullopt);
    else
      values.push_back(set_at(sets[static_cast<std::size_t>(owner)], c.breakpoints[k], env));
  }
  return make_operator(c.breakpoints, pieces, values, env);
}

// --------------------------------------------------------------- operations

MonotoneOperator identity_operator(const AssumptionEnv& env) {
  return make_operator({}, {OpPiece::value(Expr::var())}, {}, env);
}

MonotoneOperator subdifferential(const PiecewiseFunction& f) {
  const std::size_t n = f.breakpoints.size();
  std::vector<OpPiece> pieces;
  std::vector<std::optional<Expr>> slopes;
  for (const auto& p : f.pieces) {
    if (p.is_infinite()) {
      pieces.push_back(OpPiece::empty());
      slopes.push_back(std::nullopt);
    } else {
      Expr d = differentiate(p.body);
      pieces.push_back(OpPiece::value(d));
      slopes.push_back(d);
    }
  }
  std::vector<std::optional<SetValue>> values;
  for (std::size_t k = 0; k < n; ++k) {
    const Expr& b = f.breakpoints[k];
    if (!f.values[k].is_finite()) {
      values.push_back(SetValue::empty());
      continue;
    }
    ExtExpr dl = ExtExpr::neg_inf(), dr = ExtExpr::pos_inf();
    if (slopes[k]) dl = limit(*slopes[k], LimitPoint::left(b), f.env);
    if (slopes[k + 1]) dr = limit(*slopes[k + 1], LimitPoint::right(b), f.env);
    values.push_back(SetValue::interval(dl, dr));
  }
  MonotoneOperator t = make_operator(f.breakpoints, pieces, values, f.env);
  t.var = f.var;
  t.numeric = t.numeric || f.numeric;
  return t;
}

MonotoneOperator scale(const MonotoneOperator& t, const Expr& lambda) {
  Expr l = simplify(lambda);
  int s = t.env.sign(l);
  if (s < 0) throw Error(ErrorCode::NegativeScalar, "scaling factor " + l.str() + " is negative");
  std::vector<OpPiece> pieces;
  for (const auto& p : t.pieces) {
    if (p.is_empty())
      pieces.push_back(p);
    else
      pieces.push_back(OpPiece::value(s == 0 ? Expr() : Expr::mul(l, p.body)));
  }
  std::vector<std::optional<SetValue>> values;
  auto mul = [&](const ExtExpr& e) { return e.is_finite() ? ExtExpr(Expr::mul(l, e.expr())) : e; };
  for (const auto& v : t.values) {
    if (v.is_empty())
      values.push_back(v);
    else if (s == 0)
      values.push_back(SetValue::point(Expr()));
    else
      values.push_back(SetValue::interval(mul(v.lo()), mul(v.hi())));
  }
  MonotoneOperator out = make_operator(t.breakpoints, pieces, values, t.env);
  out.var = t.var;
  out.numeric = out.numeric || t.numeric;
  return out;
}

namespace {

SetValue value_at(const MonotoneOperator& t, const Expr& b, const AssumptionEnv& env) {
  Location loc = locate(t.breakpoints, b, env);
  if (loc.at_breakpoint) return t.values[loc.index];
  const OpPiece& p = t.pieces[loc.index];
  if (p.is_empty()) return SetValue::empty();
  return SetValue::point(simplify(substitute(p.body, b)));
}

}  // namespace

MonotoneOperator add(const MonotoneOperator& a, const MonotoneOperator& b) {
  AssumptionEnv env = merge(a.env, b.env);
  std::vector<Expr> all = a.breakpoints;
  all.insert(all.end(), b.breakpoints.begin(), b.breakpoints.end());
  std::vector<Expr> bps = detail::sort_unique(all, env);
  std::vector<OpPiece> pieces;
  for (std::size_t i = 0; i <= bps.size(); ++i) {
    Expr rep = representative_point(cell_lo(bps, i), cell_hi(bps, i));
    const OpPiece& pa = a.pieces[locate(a.breakpoints, rep, env).index];
    const OpPiece& pb = b.pieces[locate(b.breakpoints, rep, env).index];
    if (pa.is_empty() || pb.is_empty())
      pieces.push_back(OpPiece::empty());
    else
      pieces.push_back(OpPiece::value(Expr::add(pa.body, pb.body)));
  }
  std::vector<std::optional<SetValue>> values;
  for (const auto& x : bps) values.push_back(minkowski(value_at(a, x, env), value_at(b, x, env)));
  MonotoneOperator out = make_operator(bps, pieces, values, env);
  out.var = a.var;
  out.numeric = out.numeric || a.numeric || b.numeric;
  return out;
}

namespace {

// Builds the inverse graph while walking the input graph left to right.
class GraphFlip {
 public:
  explicit GraphFlip(const AssumptionEnv& env) : env_(env) { cells_.push_back(OpPiece::empty()); }

  void point(const Expr& y, const ExtExpr& x0, const ExtExpr& x1) {
    advance(ExtExpr(y));
    SetValue v = SetValue::interval(x0, x1);
    if (!bps_.empty() && env_.order(bps_.back(), y) == Ordering::Equal) {
      SetValue& old = vals_.back();
      old = old.is_empty() ? v : SetValue::interval(old.lo(), v.hi());
      return;
    }
    push_bp(y, v);
  }

  void span(const ExtExpr& y0, const ExtExpr& y1, const OpPiece& piece) {
    if (decided(env_, y0, y1) != Ordering::Less) return;
    advance(y0);
    if (y0.is_finite() && (bps_.empty() || env_.order(bps_.back(), y0.expr()) != Ordering::Equal))
      push_bp(y0.expr(), SetValue::empty());
    if (!cells_.back().is_empty()) throw Error(ErrorCode::NotMonotone, "overlapping pieces in the inverse graph");
    cells_.back() = piece;
    last_ = y1;
    if (y1.is_finite()) push_bp(y1.expr(), SetValue::empty());
  }

  MonotoneOperator finish(const std::string& var) {
    std::vector<std::optional<SetValue>> vals(vals_.begin(), vals_.end());
    MonotoneOperator t = make_operator(bps_, cells_, vals, env_);
    t.var = var;
    return t;
  }

 private:
  void advance(const ExtExpr& y) {
    if (decided(env_, last_, y) == Ordering::Greater)
      throw Error(ErrorCode::NotMonotone, "graph is not monotone near y = " + y.str());
    last_ = y;
  }
  void push_bp(const Expr& y, const SetValue& v) {
    bps_.push_back(y);
    vals_.push_back(v);
    cells_.push_back(OpPiece::empty());
  }

  const AssumptionEnv& env_;
  ExtExpr last_ = ExtExpr::neg_inf();
  std::vector<Expr> bps_;
  std::vector<SetValue> vals_;
  std::vector<OpPiece> cells_;
};

}  // namespace

MonotoneOperator invert(const MonotoneOperator& t) {
  GraphFlip flip(t.env);
  const std::size_t n = t.breakpoints.size();
  bool numeric = t.numeric;
  for (std::size_t i = 0; i <= n; ++i) {
    const OpPiece& p = t.pieces[i];
    ExtExpr lo = cell_lo(t.breakpoints, i), hi = cell_hi(t.breakpoints, i);
    if (p.kind == OpPiece::Kind::Constant) {
      flip.point(p.body, lo, hi);
    } else if (p.kind == OpPiece::Kind::StrictMonotone) {
      InverseResult r = invert_monotone(p.body, lo, hi, t.env);
      if (r.kind == InverseResult::Kind::Implicit) numeric = true;
      flip.span(r.image_lo, r.image_hi, OpPiece::value(r.g));
    }
    if (i == n || t.values[i].is_empty()) continue;
    const SetValue& v = t.values[i];
    const Expr& b = t.breakpoints[i];
    if (v.is_point()) {
      flip.point(v.lo().expr(), b, b);
      continue;
    }
    if (v.lo().is_finite()) flip.point(v.lo().expr(), b, b);
    flip.span(v.lo(), v.hi(), OpPiece::value(b));
    if (v.hi().is_finite()) flip.point(v.hi().expr(), b, b);
  }
  MonotoneOperator out = flip.finish(t.var == "x" ? "y" : "x");
  out.numeric = out.numeric || numeric;
  return out;
}

MonotoneOperator resolvent(const MonotoneOperator& t, const Expr& lambda) {
  if (t.env.sign(lambda) <= 0)
    throw Error(ErrorCode::NegativeScalar, "resolvent parameter " + lambda.str() + " must be positive");
  MonotoneOperator r = invert(add(identity_operator(t.env), scale(t, lambda)));
  for (const auto& v : r.values)
    if (!v.is_empty() && !v.is_point())
      throw Error(ErrorCode::NotMonotone, "resolvent is not single-valued; the operator is not monotone");
  return r;
}

MonotoneOperator prox(const PiecewiseFunction& f, const Expr& lambda) { return resolvent(subdifferential(f), lambda); }

// ---------------------------------------------------------------- evaluation

SetValue eval_op(const MonotoneOperator& t, const ExtReal& x, const ExactParams& params) {
  auto num = [&](const ExtExpr& e) -> ExtExpr {
    if (!e.is_finite()) return e;
    ExtReal v = eval(bind(e.expr(), params), ExtReal(Num(0)), params);
    if (v.kind() == ExtReal::Kind::PosInf) return ExtExpr::pos_inf();
    if (v.kind() == ExtReal::Kind::NegInf) return ExtExpr::neg_inf();
    return ExtExpr(Expr::number(v.value()));
  };
  if (!x.is_finite()) {
    std::size_t i = x.kind() == ExtReal::Kind::PosInf ? t.pieces.size() - 1 : 0;
    if (t.pieces[i].is_empty()) return SetValue::empty();
    ExtReal v = eval(t.pieces[i].body, x, params);
    if (!v.is_finite()) return SetValue::empty();
    return SetValue::point(Expr::number(v.value()));
  }
  std::vector<Expr> bps;
  for (const auto& b : t.breakpoints) bps.push_back(simplify(bind(b, params)));
  Location loc = locate(bps, Expr::number(x.value()), t.env);
  if (loc.at_breakpoint) {
    const SetValue& v = t.values[loc.index];
    if (v.is_empty()) return v;
    return SetValue::interval(num(v.lo()), num(v.hi()));
  }
  const OpPiece& p = t.pieces[loc.index];
  if (p.is_empty()) return SetValue::empty();
  return SetValue::point(num(ExtExpr(substitute(p.body, Expr::number(x.value())))).expr());
}

NumericSet eval_op_double(const MonotoneOperator& t, double x, const NumericParams& params) {
  auto d = [&](const ExtExpr& e) -> double {
    if (e.is_pos_inf()) return INFINITY;
    if (e.is_neg_inf()) return -INFINITY;
    return eval_double(e.expr(), 0, params);
  };
  std::size_t i = 0;
  for (; i < t.breakpoints.size(); ++i) {
    double b = eval_double(t.breakpoints[i], 0, params);
    if (x == b) {
      const SetValue& v = t.values[i];
      if (v.is_empty()) return {1, 0};
      return {d(v.lo()), d(v.hi())};
    }
    if (x < b) break;
  }
  const OpPiece& p = t.pieces[i];
  if (p.is_empty()) return {1, 0};
  double v = eval_double(p.body, x, params);
  return {v, v};
}

std::string to_string(const MonotoneOperator& t) {
  const std::string& x = t.var;
  auto body = [&](const OpPiece& p) { return p.is_empty() ? std::string("empty") : "{" + p.body.str(x) + "}"; };
  if (t.breakpoints.empty()) {
    if (!t.pieces[0].is_empty()) return t.pieces[0].body.str(x);
    return "sd{ " + x + " < 0 -> empty ; " + x + " >= 0 -> empty }";
  }
  const std::size_t n = t.breakpoints.size();
  auto matches = [&](std::size_t k, const OpPiece& p) {
    if (p.is_empty()) return t.values[k].is_empty();
    if (!t.values[k].is_point() || p.body.has_numeric()) return false;
    try {
      return simplify(substitute(p.body, t.breakpoints[k])) == t.values[k].lo().expr();
    } catch (const Error&) {
      return false;
    }
  };
  std::vector<std::string> cells, points;
  std::vector<int> attach;
  for (const auto& p : t.pieces) cells.push_back(body(p));
  for (std::size_t k = 0; k < n; ++k) {
    points.push_back(t.values[k].str(x));
    attach.push_back(matches(k, t.pieces[k]) ? -1 : matches(k, t.pieces[k + 1]) ? 1 : 0);
  }
  return detail::render_branches("sd", x, t.breakpoints, cells, points, attach);
}

MonotoneOperator parse_operator(std::string_view text, const AssumptionEnv& env, const ParseOptions& options) {
  MonotoneOperator out = parse_operator_body(text, env, options);
  out.var = options.var;
  return out;
}

}  // namespace symop
