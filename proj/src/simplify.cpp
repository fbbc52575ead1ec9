#include "symop/simplify.hpp"

#include <algorithm>

#include "symop/error.hpp"

namespace symop {

namespace {

using Factor = Poly::Factor;
using Monomial = Poly::Monomial;

int cmp_rat(const Rational& a, const Rational& b) { return a == b ? 0 : (a < b ? -1 : 1); }

int cmp_mono(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    int c = compare(a[i].base, b[i].base);
    if (c != 0) return c;
    c = cmp_rat(a[i].exp, b[i].exp);
    if (c != 0) return c;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

std::optional<Rational> exact_root(const Rational& v, const Rational& r) {
  // v^r for rational r when the result is rational.
  if (r.get_den() == 1) return std::nullopt;
  if (!r.get_den().fits_ulong_p()) return std::nullopt;
  unsigned long q = r.get_den().get_ui();
  bool neg = sgn(v) < 0;
  if (neg && q % 2 == 0) return std::nullopt;
  Rational mag = abs(v);
  mpz_class rn, rd;
  if (mpz_root(rn.get_mpz_t(), mag.get_num_mpz_t(), q) == 0) return std::nullopt;
  if (mpz_root(rd.get_mpz_t(), mag.get_den_mpz_t(), q) == 0) return std::nullopt;
  Num root = Num(Rational(rn, rd)).pow_int(r.get_num().get_si());
  Rational out = root.rational();
  if (neg && mpz_odd_p(r.get_num_mpz_t())) out = -out;
  return out;
}

}  // namespace

Poly Poly::constant(const Num& c) {
  Poly p;
  if (!c.is_zero()) p.terms_.push_back({{}, c});
  return p;
}

Poly Poly::atom(const Expr& base, const Rational& exp) {
  Poly p;
  p.add_term({{base, exp}}, Num(1));
  return p;
}

std::optional<Num> Poly::as_constant() const {
  if (terms_.empty()) return Num(0);
  if (terms_.size() == 1 && terms_[0].mono.empty()) return terms_[0].coef;
  return std::nullopt;
}

bool Poly::has_var() const {
  for (const auto& t : terms_)
    for (const auto& f : t.mono)
      if (f.base.has_var()) return true;
  return false;
}

void Poly::add_term(Monomial m, const Num& c0) {
  if (c0.is_zero()) return;
  Num c = c0;
  std::sort(m.begin(), m.end(), [](const Factor& a, const Factor& b) {
    int k = compare(a.base, b.base);
    return k < 0;
  });
  Monomial merged;
  for (auto& f : m) {
    if (!merged.empty() && merged.back().base == f.base)
      merged.back().exp += f.exp;
    else
      merged.push_back(f);
  }
  // Merge exp atoms into a single exp of the summed argument.
  Poly exp_arg;
  bool any_exp = false;
  Monomial out;
  for (auto& f : merged) {
    if (f.exp == 0) continue;
    if (f.base.kind() == Expr::Kind::Exp) {
      any_exp = true;
      Poly a = Poly::from(f.base.arg(0));
      exp_arg = exp_arg + a.scaled(Num(f.exp));
      continue;
    }
    if (f.base.kind() == Expr::Kind::Number) {
      const Num& v = f.base.value();
      if (f.exp.get_den() == 1) {
        c = c * v.pow_int(f.exp.get_num().get_si());
        continue;
      }
      if (v.is_exact()) {
        if (auto r = exact_root(v.rational(), f.exp)) {
          c = c * Num(*r);
          continue;
        }
      }
    }
    out.push_back(f);
  }
  if (any_exp && !exp_arg.is_zero()) {
    auto k = exp_arg.as_constant();
    if (k && k->is_zero()) {
      // exp(0)
    } else {
      out.push_back({Expr::exp(exp_arg.to_expr()), 1});
      std::sort(out.begin(), out.end(),
                [](const Factor& a, const Factor& b) { return compare(a.base, b.base) < 0; });
    }
  }
  if (c.is_zero()) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), out,
                             [](const Term& t, const Monomial& mono) { return cmp_mono(t.mono, mono) < 0; });
  if (it != terms_.end() && cmp_mono(it->mono, out) == 0) {
    it->coef = it->coef + c;
    if (it->coef.is_zero()) terms_.erase(it);
  } else {
    terms_.insert(it, Term{std::move(out), c});
  }
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (const auto& t : o.terms_) r.add_term(t.mono, t.coef);
  return r;
}

Poly Poly::operator-() const { return scaled(Num(-1)); }

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::scaled(const Num& c) const {
  Poly r;
  if (c.is_zero()) return r;
  for (const auto& t : terms_) r.add_term(t.mono, t.coef * c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      Monomial m = a.mono;
      m.insert(m.end(), b.mono.begin(), b.mono.end());
      r.add_term(std::move(m), a.coef * b.coef);
    }
  }
  return r;
}

Poly Poly::inverse() const {
  if (terms_.empty()) throw Error(ErrorCode::Domain, "division by zero");
  if (terms_.size() == 1) {
    Monomial m = terms_[0].mono;
    for (auto& f : m) f.exp = -f.exp;
    Poly r;
    r.add_term(std::move(m), Num(1) / terms_[0].coef);
    return r;
  }
  return atom(to_expr(), -1);
}

Poly Poly::cancelled() const {
  std::vector<Expr> sums;
  for (const auto& t : terms_)
    for (const auto& f : t.mono)
      if (f.exp == -1 && (f.base.kind() == Expr::Kind::Add || f.base.kind() == Expr::Kind::Sub) &&
          std::find(sums.begin(), sums.end(), f.base) == sums.end())
        sums.push_back(f.base);
  Poly cur = *this;
  for (const Expr& d : sums) {
    Poly num, rest;
    for (const auto& t : cur.terms_) {
      Monomial m;
      bool hit = false;
      for (const auto& f : t.mono) {
        if (!hit && f.exp == -1 && f.base == d)
          hit = true;
        else
          m.push_back(f);
      }
      (hit ? num : rest).add_term(m, t.coef);
    }
    Poly den = from(d);
    if (num.terms_.size() < 2 || den.terms_.size() < 2) continue;
    const Term& lead = den.terms_.back();
    Poly q, r = num;
    for (std::size_t it = 0; it < 2 * num.terms_.size() + 2 && !r.is_zero(); ++it) {
      const Term& t = r.terms_.back();
      Monomial m = t.mono;
      for (const auto& f : lead.mono) m.push_back({f.base, -f.exp});
      Poly step;
      step.add_term(m, t.coef / lead.coef);
      q = q + step;
      r = r - step * den;
    }
    if (r.is_zero()) cur = rest + q;
  }
  return cur;
}

Poly Poly::implicit_reduced() const {
  std::vector<Expr> atoms;
  for (const auto& t : terms_)
    for (const auto& f : t.mono)
      if (f.base.kind() == Expr::Kind::Implicit && std::find(atoms.begin(), atoms.end(), f.base) == atoms.end())
        atoms.push_back(f.base);
  thread_local std::vector<Expr> active;
  Poly cur = *this;
  for (const Expr& a : atoms) {
    if (std::find(active.begin(), active.end(), a) != active.end()) continue;
    active.push_back(a);
    Poly rel;
    try {
      rel = from(substitute(a.arg(0), a)) - from(a.arg(1));
    } catch (...) {
      active.pop_back();
      throw;
    }
    active.pop_back();
    // Lead: a call of a (exponent 1) if one occurs alone, else the highest
    // integer power a^n, n >= 2.
    const Term* lead = nullptr;
    for (const auto& t : rel.terms_) {
      if (t.mono.size() != 1) continue;
      const Factor& f = t.mono[0];
      if (f.base != a && f.exp == 1 && f.base.has_kind(Expr::Kind::Implicit) && f.base.arity() == 1 &&
          f.base.arg(0) == a) {
        lead = &t;
        break;
      }
      if (f.base == a && f.exp.get_den() == 1 && f.exp >= 2 && (!lead || f.exp > lead->mono[0].exp)) lead = &t;
    }
    if (!lead) continue;
    const Factor key = lead->mono[0];
    Poly repl;
    for (const auto& t : rel.terms_)
      if (&t != lead) repl.add_term(t.mono, -(t.coef / lead->coef));
    for (int it = 0; it < 64; ++it) {
      bool changed = false;
      Poly next;
      for (const auto& t : cur.terms_) {
        auto hit = std::find_if(t.mono.begin(), t.mono.end(), [&](const Factor& f) {
          return f.base == key.base && f.exp.get_den() == 1 && f.exp >= key.exp;
        });
        if (hit == t.mono.end()) {
          next.add_term(t.mono, t.coef);
          continue;
        }
        Monomial m;
        for (auto f = t.mono.begin(); f != t.mono.end(); ++f) {
          if (f != hit)
            m.push_back(*f);
          else if (f->exp != key.exp)
            m.push_back({f->base, f->exp - key.exp});
        }
        Poly rest;
        rest.add_term(m, t.coef);
        next = next + rest * repl;
        changed = true;
      }
      cur = next;
      if (!changed) break;
    }
  }
  return cur;
}

Poly Poly::pow(const Rational& r) const {
  if (r == 0) return constant(Num(1));
  if (r == 1) return *this;
  if (r.get_den() == 1) {
    long n = r.get_num().get_si();
    if (n < 0) return pow(Rational(-n)).inverse();
    if (terms_.empty()) return Poly();
    if (terms_.size() == 1) {
      Monomial m = terms_[0].mono;
      for (auto& f : m) f.exp *= n;
      Poly out;
      out.add_term(std::move(m), terms_[0].coef.pow_int(n));
      return out;
    }
    if (n > 8) return atom(to_expr(), r);
    Poly out = constant(Num(1));
    for (long i = 0; i < n; ++i) out = out * *this;
    return out;
  }
  if (terms_.empty()) {
    if (sgn(r) < 0) throw Error(ErrorCode::Domain, "zero to a negative power");
    return Poly();
  }
  bool odd_root = mpz_odd_p(r.get_den_mpz_t());
  if (terms_.size() == 1) {
    const Term& t = terms_[0];
    std::optional<Rational> cr;
    if (t.coef.is_exact()) cr = t.coef.is_one() ? std::optional<Rational>(1) : exact_root(t.coef.rational(), r);
    bool factors_ok = odd_root;
    if (!odd_root) {
      // Even roots distribute only over factors known to be positive.
      factors_ok = std::all_of(t.mono.begin(), t.mono.end(),
                               [](const Factor& f) { return f.base.kind() == Expr::Kind::Exp; });
    }
    if (cr && factors_ok) {
      Monomial m = t.mono;
      for (auto& f : m) f.exp *= r;
      Poly out;
      out.add_term(std::move(m), Num(*cr));
      return out;
    }
    if (t.mono.empty()) return atom(Expr::number(t.coef), r);
  }
  return atom(to_expr(), r);
}

Poly Poly::from(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Number: return constant(e.value());
    case K::Var:
    case K::Param: return atom(e);
    case K::Neg: return -from(e.arg(0));
    case K::Add: return from(e.arg(0)) + from(e.arg(1));
    case K::Sub: return from(e.arg(0)) - from(e.arg(1));
    case K::Mul: return from(e.arg(0)) * from(e.arg(1));
    case K::Div: return from(e.arg(0)) * from(e.arg(1)).inverse();
    case K::Pow: return from(e.arg(0)).pow(e.exponent());
    case K::Exp: {
      Poly u = from(e.arg(0));
      if (u.is_zero()) return constant(Num(1));
      if (u.terms_.size() == 1 && u.terms_[0].coef.is_one() && u.terms_[0].mono.size() == 1 &&
          u.terms_[0].mono[0].exp == 1 && u.terms_[0].mono[0].base.kind() == K::Ln)
        return from(u.terms_[0].mono[0].base.arg(0));
      return atom(Expr::exp(u.to_expr()));
    }
    case K::Ln: {
      Poly v = from(e.arg(0));
      auto c = v.as_constant();
      if (c && c->is_one()) return Poly();
      if (v.terms_.size() == 1 && v.terms_[0].coef.is_one() && v.terms_[0].mono.size() == 1 &&
          v.terms_[0].mono[0].base.kind() == K::Exp)
        return from(v.terms_[0].mono[0].base.arg(0)).scaled(Num(v.terms_[0].mono[0].exp));
      return atom(Expr::ln(v.to_expr()));
    }
    case K::Abs: {
      Poly v = from(e.arg(0));
      if (auto c = v.as_constant()) return constant(c->sign() < 0 ? -*c : *c);
      return atom(Expr::abs(v.to_expr()));
    }
    case K::Implicit: {
      auto lo = e.implicit_lo();
      auto hi = e.implicit_hi();
      if (Expr arg = simplify(e.arg(1)); arg.is_number() && arg.value().is_exact()) {
        for (const Num& t : {Num(0), Num(1), Num(-1), arg.value()}) {
          auto inside = [&](const std::optional<Expr>& b, bool upper) {
            if (!b) return true;
            Expr v = simplify(*b);
            return v.is_number() && (upper ? t < v.value() : v.value() < t);
          };
          if (!inside(lo, false) || !inside(hi, true)) continue;
          try {
            ExtReal f = eval(e.arg(0), ExtReal(t));
            if (f.is_finite() && f.value().is_exact() && f.value() == arg.value()) return constant(t);
          } catch (const Error&) {
          }
        }
      }
      return atom(Expr::implicit(simplify(e.arg(0)), simplify(e.arg(1)),
                                 lo ? std::optional<Expr>(simplify(*lo)) : std::nullopt,
                                 hi ? std::optional<Expr>(simplify(*hi)) : std::nullopt));
    }
    case K::Integral:
      return atom(Expr::integral(simplify(e.arg(0)), simplify(e.arg(1)), simplify(e.arg(2))));
  }
  return Poly();
}

namespace {

Rational var_degree(const Monomial& m) {
  for (const auto& f : m)
    if (f.base.kind() == Expr::Kind::Var) return f.exp;
  return 0;
}

Expr factor_expr(const Factor& f, const Rational& e) {
  if (e == 1) return f.base;
  return Expr::pow(f.base, e);
}

int print_rank(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Number: return 0;
    case Expr::Kind::Param: return 1;
    case Expr::Kind::Var: return 2;
    default: return 3;
  }
}

Expr product(const std::vector<Expr>& xs) {
  Expr acc = xs.front();
  for (std::size_t i = 1; i < xs.size(); ++i) acc = Expr::mul(acc, xs[i]);
  return acc;
}

}  // namespace

Expr Poly::to_expr() const {
  if (terms_.empty()) return Expr();
  std::vector<const Term*> order;
  for (const auto& t : terms_) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](const Term* a, const Term* b) {
    Rational da = var_degree(a->mono), db = var_degree(b->mono);
    if (da != db) return da > db;
    bool ca = a->mono.empty(), cb = b->mono.empty();
    if (ca != cb) return ca;
    return false;
  });
  // Avoid a leading minus when some term is positive.
  if (order.front()->coef.sign() < 0) {
    auto pos = std::find_if(order.begin(), order.end(), [](const Term* t) { return t->coef.sign() > 0; });
    if (pos != order.end()) std::rotate(order.begin(), pos, pos + 1);
  }
  Expr acc;
  bool first = true;
  for (const Term* t : order) {
    // Print parameters first, then the variable, then other atoms.
    std::vector<const Factor*> fs;
    for (const auto& f : t->mono) fs.push_back(&f);
    std::stable_sort(fs.begin(), fs.end(), [](const Factor* a, const Factor* b) { return print_rank(a->base) < print_rank(b->base); });
    std::vector<Expr> num, den;
    for (const Factor* f : fs) {
      if (sgn(f->exp) > 0)
        num.push_back(factor_expr(*f, f->exp));
      else
        den.push_back(factor_expr(*f, -f->exp));
    }
    bool negative = t->coef.sign() < 0;
    // The leading term carries its own sign; later ones become subtractions.
    bool sign_inside = first && negative;
    Num mag = negative ? -t->coef : t->coef;
    Expr term;
    if (t->mono.empty()) {
      term = Expr::number(sign_inside ? t->coef : mag);
    } else {
      Num p = mag, d(1);
      if (mag.is_exact()) {
        p = Num(Rational(mag.rational().get_num()));
        d = Num(Rational(mag.rational().get_den()));
      }
      if (!p.is_one() || num.empty()) {
        num.insert(num.begin(), Expr::number(sign_inside ? -p : p));
      } else if (sign_inside) {
        num.front() = Expr::neg(num.front());
      }
      if (!d.is_one()) den.insert(den.begin(), Expr::number(d));
      term = den.empty() ? product(num) : Expr::div(product(num), product(den));
    }
    if (first) {
      acc = term;
      first = false;
    } else {
      acc = negative ? Expr::sub(acc, term) : Expr::add(acc, term);
    }
  }
  return acc;
}

namespace {

// Rational functions of a single atom z with exact coefficients, reduced by
// their gcd.
using UPoly = std::vector<Rational>;

void trim(UPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

UPoly padd(const UPoly& a, const UPoly& b) {
  UPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

UPoly pmul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

// a = q b + r
std::pair<UPoly, UPoly> pdivmod(UPoly a, const UPoly& b) {
  UPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
  while (a.size() >= b.size() && !a.empty()) {
    std::size_t k = a.size() - b.size();
    Rational c = a.back() / b.back();
    q[k] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[i + k] -= c * b[i];
    a.pop_back();
    trim(a);
  }
  trim(q);
  return {q, a};
}

struct RatFn {
  UPoly num, den;
};

RatFn reduced(RatFn f) {
  if (f.num.empty()) return {{}, {Rational(1)}};
  UPoly a = f.num, b = f.den;
  while (!b.empty()) {
    UPoly r = pdivmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  f.num = pdivmod(f.num, a).first;
  f.den = pdivmod(f.den, a).first;
  Rational lead = f.den.back();
  for (auto& c : f.num) c /= lead;
  for (auto& c : f.den) c /= lead;
  return f;
}

std::optional<RatFn> rational_form(const Expr& e, std::optional<Expr>& z) {
  using K = Expr::Kind;
  auto two = [&](auto op) -> std::optional<RatFn> {
    auto a = rational_form(e.arg(0), z);
    if (!a) return std::nullopt;
    auto b = rational_form(e.arg(1), z);
    if (!b) return std::nullopt;
    return op(*a, *b);
  };
  switch (e.kind()) {
    case K::Number:
      if (!e.value().is_exact()) return std::nullopt;
      return RatFn{e.value().rational() == 0 ? UPoly{} : UPoly{e.value().rational()}, {Rational(1)}};
    case K::Neg: {
      auto a = rational_form(e.arg(0), z);
      if (a)
        for (auto& c : a->num) c = -c;
      return a;
    }
    case K::Add:
    case K::Sub:
      return two([&](const RatFn& a, const RatFn& b) {
        UPoly bn = b.num;
        if (e.kind() == K::Sub)
          for (auto& c : bn) c = -c;
        return reduced({padd(pmul(a.num, b.den), pmul(bn, a.den)), pmul(a.den, b.den)});
      });
    case K::Mul: return two([](const RatFn& a, const RatFn& b) { return reduced({pmul(a.num, b.num), pmul(a.den, b.den)}); });
    case K::Div:
      return two([](const RatFn& a, const RatFn& b) -> std::optional<RatFn> {
        if (b.num.empty()) return std::nullopt;
        return reduced({pmul(a.num, b.den), pmul(a.den, b.num)});
      });
    case K::Pow: {
      const Rational& r = e.exponent();
      if (r.get_den() != 1 || !r.get_num().fits_slong_p() || abs(r) > 64) break;
      auto a = rational_form(e.arg(0), z);
      if (!a) return std::nullopt;
      long n = r.get_num().get_si();
      if (n < 0) {
        if (a->num.empty()) return std::nullopt;
        std::swap(a->num, a->den);
        n = -n;
      }
      RatFn out{{Rational(1)}, {Rational(1)}};
      for (long i = 0; i < n; ++i) out = {pmul(out.num, a->num), pmul(out.den, a->den)};
      return reduced(out);
    }
    default: break;
  }
  if (!z) z = e;
  if (!(*z == e)) return std::nullopt;
  return RatFn{{Rational(0), Rational(1)}, {Rational(1)}};
}

Expr upoly_expr(const UPoly& a, const Expr& z) {
  Expr out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0) continue;
    Expr t = Expr::rational(a[k]);
    if (k > 0) t = Expr::mul(t, Expr::pow(z, Rational(static_cast<long>(k))));
    out = Expr::add(out, t);
  }
  return out;
}

std::optional<Poly> rational_reduced(const Poly& p) {
  bool quotient = false;
  for (const auto& t : p.terms())
    for (const auto& f : t.mono)
      quotient = quotient || (f.exp < 0 && (f.base.kind() == Expr::Kind::Add || f.base.kind() == Expr::Kind::Sub));
  if (!quotient) return std::nullopt;
  std::optional<Expr> z;
  auto r = rational_form(p.to_expr(), z);
  if (!r || !z) return std::nullopt;
  return Poly::from(Expr::div(upoly_expr(r->num, *z), upoly_expr(r->den, *z))).cancelled();
}

// The variable rewritten as fwd(a) for an implicit atom a = I(fwd, x).
std::optional<Poly> var_eliminated(const Poly& p) {
  std::optional<Expr> atom;
  bool var = false;
  for (const auto& t : p.terms())
    for (const auto& f : t.mono) {
      if (f.base.kind() == Expr::Kind::Var) var = true;
      if (!atom && f.base.kind() == Expr::Kind::Implicit && f.base.arg(1).kind() == Expr::Kind::Var) atom = f.base;
    }
  if (!var || !atom) return std::nullopt;
  Poly fwd = Poly::from(substitute(atom->arg(0), *atom));
  Poly out;
  for (const auto& t : p.terms()) {
    Poly term = Poly::constant(t.coef);
    for (const auto& f : t.mono) {
      if (f.base.kind() != Expr::Kind::Var)
        term = term * Poly::atom(f.base, f.exp);
      else if (f.exp.get_den() == 1 && f.exp > 0)
        term = term * fwd.pow(f.exp);
      else
        return std::nullopt;
    }
    out = out + term;
  }
  return out.cancelled().implicit_reduced();
}

}  // namespace

Expr simplify(const Expr& e) {
  Poly p = Poly::from(e).implicit_reduced().cancelled();
  if (auto q = var_eliminated(p); q && q->terms().size() < p.terms().size()) p = *q;
  if (auto q = rational_reduced(p); q && q->terms().size() < p.terms().size()) p = *q;
  return p.to_expr();
}

bool same_function(const Expr& a, const Expr& b) { return Poly::from(Expr::sub(a, b)).is_zero(); }

Expr ParamAffine::to_expr() const {
  Poly p = Poly::constant(Num(constant));
  for (const auto& [name, c] : coef) p = p + Poly::atom(Expr::param(name)).scaled(Num(c));
  return p.to_expr();
}

std::optional<ParamAffine> as_param_affine(const Expr& e) {
  if (e.has_var() || e.has_numeric()) return std::nullopt;
  Poly p = Poly::from(e);
  ParamAffine out;
  for (const auto& t : p.terms()) {
    Rational c = t.coef.is_exact() ? t.coef.rational() : Rational(t.coef.to_double());
    if (t.mono.empty()) {
      out.constant += c;
    } else if (t.mono.size() == 1 && t.mono[0].exp == 1 && t.mono[0].base.kind() == Expr::Kind::Param) {
      out.coef[t.mono[0].base.name()] += c;
    } else {
      return std::nullopt;
    }
  }
  for (auto it = out.coef.begin(); it != out.coef.end();) {
    if (it->second == 0)
      it = out.coef.erase(it);
    else
      ++it;
  }
  return out;
}

std::optional<std::vector<Expr>> as_polynomial(const Expr& e) {
  Poly p = Poly::from(e);
  std::vector<Poly> coeffs;
  for (const auto& t : p.terms()) {
    Rational k = 0;
    Poly::Monomial rest;
    for (const auto& f : t.mono) {
      if (f.base.kind() == Expr::Kind::Var) {
        k = f.exp;
      } else if (f.base.has_var()) {
        return std::nullopt;
      } else {
        rest.push_back(f);
      }
    }
    if (k.get_den() != 1 || sgn(k) < 0) return std::nullopt;
    std::size_t deg = k.get_num().get_ui();
    if (coeffs.size() <= deg) coeffs.resize(deg + 1);
    Poly term = Poly::constant(t.coef);
    for (const auto& f : rest) term = term * Poly::atom(f.base, f.exp);
    coeffs[deg] = coeffs[deg] + term;
  }
  std::vector<Expr> out;
  for (const auto& c : coeffs) out.push_back(c.to_expr());
  if (out.empty()) out.push_back(Expr());
  return out;
}

std::optional<std::pair<Expr, Expr>> as_linear(const Expr& e) {
  auto c = as_polynomial(e);
  if (!c || c->size() > 2) return std::nullopt;
  Expr intercept = (*c)[0];
  Expr slope = c->size() > 1 ? (*c)[1] : Expr();
  return std::make_pair(slope, intercept);
}

}  // namespace symop
