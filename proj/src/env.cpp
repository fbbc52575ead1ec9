#include "symop/env.hpp"

#include <cmath>
#include <map>

#include "symop/error.hpp"

namespace symop {

const char* ordering_name(Ordering o) {
  switch (o) {
    case Ordering::Less: return "Less";
    case Ordering::Equal: return "Equal";
    case Ordering::Greater: return "Greater";
    case Ordering::Undecidable: return "Undecidable";
  }
  return "?";
}

namespace {

// sum coef*p + c  (<|<=)  0
struct Row {
  std::map<std::string, Rational> coef;
  Rational c;
  bool strict;
};

Row to_row(const ParamAffine& d, bool strict) { return Row{d.coef, d.constant, strict}; }

void drop_zeros(Row& r) {
  for (auto it = r.coef.begin(); it != r.coef.end();) {
    if (it->second == 0)
      it = r.coef.erase(it);
    else
      ++it;
  }
}

std::vector<Row> eliminate(const std::vector<Row>& rows, const std::string& v) {
  std::vector<Row> pos, neg, out;
  for (const auto& r : rows) {
    auto it = r.coef.find(v);
    if (it == r.coef.end() || it->second == 0)
      out.push_back(r);
    else if (sgn(it->second) > 0)
      pos.push_back(r);
    else
      neg.push_back(r);
  }
  for (const auto& p : pos) {
    for (const auto& n : neg) {
      Rational cp = p.coef.at(v), cn = -n.coef.at(v);
      Row r;
      r.c = p.c / cp + n.c / cn;
      r.strict = p.strict || n.strict;
      for (const auto& [k, a] : p.coef) r.coef[k] += a / cp;
      for (const auto& [k, a] : n.coef) r.coef[k] += a / cn;
      r.coef.erase(v);
      drop_zeros(r);
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::set<std::string> row_vars(const std::vector<Row>& rows) {
  std::set<std::string> vs;
  for (const auto& r : rows)
    for (const auto& [k, a] : r.coef)
      if (a != 0) vs.insert(k);
  return vs;
}

bool infeasible(std::vector<Row> rows) {
  for (const auto& v : row_vars(rows)) rows = eliminate(rows, v);
  for (const auto& r : rows) {
    if (r.strict ? sgn(r.c) >= 0 : sgn(r.c) > 0) return true;
  }
  return false;
}

std::optional<ParamAffine> affine_of(const Expr& e) {
  if (e.has_var()) return std::nullopt;
  return as_param_affine(e);
}

}  // namespace

void AssumptionEnv::assume(const Expr& lhs, const Expr& rhs, bool strict) {
  auto d = affine_of(Expr::sub(lhs, rhs));
  if (!d) throw Error(ErrorCode::Unsupported, "assumption is not affine in the parameters: " + lhs.str() + (strict ? " < " : " <= ") + rhs.str());
  facts_.push_back({*d, strict, lhs.str() + (strict ? " < " : " <= ") + rhs.str()});
  check_consistent();
}

void AssumptionEnv::assume(std::string_view text) {
  std::vector<std::string> sides;
  std::vector<std::string> ops;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char ch = text[i];
    if (ch == '<' || ch == '>' || ch == '=') {
      std::string op(1, ch);
      if (ch != '=' && i + 1 < text.size() && text[i + 1] == '=') {
        op += '=';
        ++i;
      }
      sides.push_back(cur);
      ops.push_back(op);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  sides.push_back(cur);
  if (ops.empty()) throw SyntaxError(text.size(), {"<", "<=", ">", ">=", "="}, "assumption needs a relation");
  ParseOptions opts;
  opts.var = "\x01";
  std::vector<Expr> es;
  for (const auto& s : sides) es.push_back(parse_expr(s, opts));
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const std::string& op = ops[i];
    if (op == "<") assume(es[i], es[i + 1], true);
    else if (op == "<=") assume(es[i], es[i + 1], false);
    else if (op == ">") assume(es[i + 1], es[i], true);
    else if (op == ">=") assume(es[i + 1], es[i], false);
    else {
      assume(es[i], es[i + 1], false);
      assume(es[i + 1], es[i], false);
    }
  }
}

void AssumptionEnv::add_fact(const Fact& f) {
  for (const auto& g : facts_)
    if (g.text == f.text) return;
  facts_.push_back(f);
  check_consistent();
}

AssumptionEnv merge(const AssumptionEnv& a, const AssumptionEnv& b) {
  AssumptionEnv out = a;
  for (const auto& f : b.facts()) out.add_fact(f);
  return out;
}

std::set<std::string> AssumptionEnv::params() const {
  std::set<std::string> out;
  for (const auto& f : facts_)
    for (const auto& [k, a] : f.d.coef) out.insert(k);
  return out;
}

bool AssumptionEnv::infeasible_with(const std::vector<Fact>& extra) const {
  std::vector<Row> rows;
  for (const auto& f : facts_) rows.push_back(to_row(f.d, f.strict));
  for (const auto& f : extra) rows.push_back(to_row(f.d, f.strict));
  return infeasible(std::move(rows));
}

void AssumptionEnv::check_consistent() const {
  if (infeasible_with({})) throw Error(ErrorCode::InconsistentEnv, "assumptions are contradictory");
}

bool AssumptionEnv::proves_nonpositive(const Expr& e, bool strict) const {
  auto d = affine_of(e);
  if (!d) return false;
  // e <= 0 follows iff facts plus e > 0 (i.e. -e < 0) is infeasible.
  ParamAffine neg = *d;
  neg.constant = -neg.constant;
  for (auto& [k, a] : neg.coef) a = -a;
  return infeasible_with({Fact{neg, !strict, ""}});
}

std::optional<int> AssumptionEnv::structural_sign(const Expr& e) const {
  using K = Expr::Kind;
  if (auto d = affine_of(e)) {
    if (d->is_constant()) return sgn(d->constant);
    Expr de = d->to_expr();
    if (proves_nonpositive(de, true)) return -1;
    if (proves_nonpositive(Expr::neg(de), true)) return 1;
    if (proves_nonpositive(de, false) && proves_nonpositive(Expr::neg(de), false)) return 0;
    return std::nullopt;
  }
  if (e.params().empty() && !e.has_var()) {
    double v = eval_double(e, 0);
    if (std::fabs(v) < 1e-300) return 0;
    return v < 0 ? -1 : 1;
  }
  auto combine_sum = [](std::optional<int> a, std::optional<int> b) -> std::optional<int> {
    if (!a || !b) return std::nullopt;
    if (*a == 0) return b;
    if (*b == 0) return a;
    if (*a == *b) return a;
    return std::nullopt;
  };
  switch (e.kind()) {
    case K::Neg: {
      auto s = structural_sign(e.arg(0));
      if (!s) return s;
      return -*s;
    }
    case K::Mul:
    case K::Div: {
      auto a = structural_sign(e.arg(0));
      auto b = structural_sign(e.arg(1));
      if (!a || !b) return std::nullopt;
      return *a * *b;
    }
    case K::Pow: {
      auto s = structural_sign(e.arg(0));
      if (!s) return std::nullopt;
      if (*s >= 0) return s;
      const Rational& r = e.exponent();
      if (mpz_even_p(r.get_num_mpz_t())) return 1;
      return -1;
    }
    case K::Exp: return 1;
    case K::Abs: {
      auto s = structural_sign(e.arg(0));
      if (!s) return std::nullopt;
      return *s == 0 ? 0 : 1;
    }
    case K::Ln: return structural_sign(simplify(Expr::sub(e.arg(0), Expr::integer(1))));
    case K::Add: return combine_sum(structural_sign(e.arg(0)), structural_sign(e.arg(1)));
    case K::Sub: {
      auto b = structural_sign(e.arg(1));
      if (b) b = -*b;
      return combine_sum(structural_sign(e.arg(0)), b);
    }
    default: return std::nullopt;
  }
}

std::optional<int> AssumptionEnv::try_sign(const Expr& e) const {
  Expr d = simplify(e);
  if (d.is_zero()) return 0;
  if (d.params().empty() && !d.has_var()) {
    double v = eval_double(d, 0);
    double scale = 1.0;
    if (std::fabs(v) <= 1e-12 * scale) return 0;
    return v < 0 ? -1 : 1;
  }
  return structural_sign(d);
}

Ordering AssumptionEnv::compare(const Expr& a, const Expr& b) const {
  Expr d = simplify(Expr::sub(a, b));
  if (d.is_zero()) return Ordering::Equal;
  if (d.params().empty() && !d.has_var()) {
    double v = eval_double(d, 0);
    double scale = 1.0;
    try {
      scale += std::fabs(eval_double(a, 0)) + std::fabs(eval_double(b, 0));
    } catch (const Error&) {
    }
    if (std::fabs(v) <= 1e-12 * scale) return Ordering::Equal;
    return v < 0 ? Ordering::Less : Ordering::Greater;
  }
  auto s = structural_sign(d);
  if (!s) return Ordering::Undecidable;
  if (*s < 0) return Ordering::Less;
  if (*s > 0) return Ordering::Greater;
  return Ordering::Equal;
}

Ordering AssumptionEnv::order(const Expr& a, const Expr& b) const {
  Ordering o = compare(a, b);
  if (o == Ordering::Undecidable)
    throw Error(ErrorCode::UndecidableComparison,
                "cannot order " + a.str() + " and " + b.str() + " under the given assumptions");
  return o;
}

int AssumptionEnv::sign(const Expr& e) const {
  auto s = try_sign(e);
  if (!s) throw Error(ErrorCode::UndecidableComparison, "cannot decide the sign of " + e.str());
  return *s;
}

ExactParams AssumptionEnv::witness(const std::set<std::string>& extra) const {
  std::vector<Row> rows;
  for (const auto& f : facts_) rows.push_back(to_row(f.d, f.strict));
  std::vector<std::string> vars;
  for (const auto& v : row_vars(rows)) vars.push_back(v);
  std::vector<std::vector<Row>> stages{rows};
  for (const auto& v : vars) stages.push_back(eliminate(stages.back(), v));
  ExactParams out;
  // Assign in reverse elimination order: stage i mentions vars[i..].
  for (std::size_t i = vars.size(); i-- > 0;) {
    const std::string& v = vars[i];
    std::optional<Rational> lo, hi;
    for (const auto& r : stages[i]) {
      auto it = r.coef.find(v);
      if (it == r.coef.end() || it->second == 0) continue;
      Rational rest = r.c;
      bool ok = true;
      for (const auto& [k, a] : r.coef) {
        if (k == v) continue;
        auto w = out.find(k);
        if (w == out.end()) {
          ok = false;
          break;
        }
        rest += a * w->second;
      }
      if (!ok) continue;
      Rational bound = -rest / it->second;
      if (sgn(it->second) > 0) {
        if (!hi || bound < *hi) hi = bound;
      } else {
        if (!lo || bound > *lo) lo = bound;
      }
    }
    Rational val;
    if (lo && hi)
      val = (*lo + *hi) / 2;
    else if (lo)
      val = *lo + 1;
    else if (hi)
      val = *hi - 1;
    else
      val = Rational(3, 2) + Rational(static_cast<long>(i), 7);
    val.canonicalize();
    out[v] = val;
  }
  long k = 0;
  for (const auto& name : extra) {
    if (!out.count(name)) out[name] = Rational(3, 2) + Rational(k++, 7);
  }
  for (auto& [name, v] : out) v.canonicalize();
  return out;
}

}  // namespace symop
