#include <cctype>
#include <cstdlib>

#include "parser.hpp"

namespace symop::detail {

namespace {

const std::vector<std::string> kOperand = {"number", "variable", "parameter", "(", "-",
                                           "abs", "exp", "ln", "sqrt"};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

Parser::Parser(std::string_view text, ParseOptions options) : options_(std::move(options)) {
  static const char* kTwoChar[] = {"<=", ">=", "->", ";;"};
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.offset = i;
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i;
      bool decimal = false;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && text[j] == '.') {
        decimal = true;
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
        if (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
          decimal = true;
          j = k;
          while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        }
      }
      t.kind = decimal ? Tok::Decimal : Tok::Int;
      t.text = std::string(text.substr(i, j - i));
      i = j;
    } else if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(text.substr(i, j - i));
      i = j;
    } else {
      t.kind = Tok::Sym;
      t.text = std::string(1, c);
      for (const char* two : kTwoChar) {
        if (text.substr(i, 2) == two) {
          t.text = two;
          break;
        }
      }
      i += t.text.size();
    }
    tokens_.push_back(std::move(t));
  }
  Token end;
  end.offset = text.size();
  tokens_.push_back(end);
}

const Token& Parser::peek(std::size_t ahead) const {
  return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
}

Token Parser::next() {
  Token t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool Parser::at_sym(std::string_view s) const {
  return peek().kind == Tok::Sym && peek().text == s;
}

bool Parser::at_ident(std::string_view s) const {
  return peek().kind == Tok::Ident && peek().text == s;
}

void Parser::fail(const std::string& detail, std::vector<std::string> expected) const {
  throw SyntaxError(peek().offset, std::move(expected), detail);
}

void Parser::expect_sym(std::string_view s) {
  if (!at_sym(s)) {
    fail(at_end() ? "unexpected end of input" : "unexpected token '" + peek().text + "'",
         {"\"" + std::string(s) + "\""});
  }
  next();
}

void Parser::expect_end() {
  if (!at_end()) fail("unexpected token '" + peek().text + "'", {"end of input", "+", "-", "*", "/"});
}

Expr Parser::expr() {
  Expr e = term();
  while (at_sym("+") || at_sym("-")) {
    bool plus = next().text == "+";
    Expr rhs = term();
    e = plus ? Expr::add(e, rhs) : Expr::sub(e, rhs);
  }
  return e;
}

Expr Parser::term() {
  if (at_sym("-")) {
    next();
    return Expr::neg(term());
  }
  Expr e = factor(true);
  while (at_sym("*") || at_sym("/")) {
    bool times = next().text == "*";
    Expr rhs = factor();
    e = times ? Expr::mul(e, rhs) : Expr::div(e, rhs);
  }
  return e;
}

Expr Parser::factor(bool lead) {
  Expr b = base(lead);
  if (at_sym("^")) {
    next();
    std::size_t at = peek().offset;
    Expr ex = base();
    if (ex.has_var() || !ex.params().empty() || ex.has_numeric())
      throw SyntaxError(at, {"rational constant"}, "exponent must be a rational constant");
    Num v;
    try {
      v = eval(ex, ExtReal(0)).value();
    } catch (const Error&) {
      throw SyntaxError(at, {"rational constant"}, "exponent must be a rational constant");
    }
    if (!v.is_exact()) throw SyntaxError(at, {"rational constant"}, "exponent must be rational");
    b = Expr::pow(b, v.rational());
  }
  return b;
}

Expr Parser::base(bool lead) {
  const Token& t = peek();
  if (t.kind == Tok::Int) {
    Token a = next();
    // A leading "p/q" is one rational literal.
    if (lead && at_sym("/") && peek(1).kind == Tok::Int) {
      next();
      Token d = next();
      Rational q(mpz_class(a.text, 10), mpz_class(d.text, 10));
      if (q.get_den() == 0) throw SyntaxError(d.offset, {"nonzero integer"}, "zero denominator");
      q.canonicalize();
      return Expr::rational(q);
    }
    return Expr::rational(Rational(mpz_class(a.text, 10)));
  }
  if (t.kind == Tok::Decimal) {
    Token a = next();
    return Expr::rational(parse_rational(a.text));
  }
  if (t.kind == Tok::Sym && t.text == "(") {
    next();
    Expr e = expr();
    expect_sym(")");
    return e;
  }
  if (t.kind == Tok::Sym && t.text == "-") {
    next();
    return Expr::neg(factor(lead));
  }
  if (t.kind == Tok::Ident) {
    Token id = next();
    if (id.text == options_.var) return Expr::var();
    if (id.text == "abs" || id.text == "exp" || id.text == "ln" || id.text == "sqrt") {
      expect_sym("(");
      Expr a = expr();
      expect_sym(")");
      if (id.text == "abs") return Expr::abs(a);
      if (id.text == "exp") return Expr::exp(a);
      if (id.text == "ln") return Expr::ln(a);
      return Expr::pow(a, Rational(1, 2));
    }
    if ((id.text == "inverse" || id.text == "integral") && at_sym("[")) return bound(id.text == "inverse");
    if (id.text == "inf")
      throw SyntaxError(id.offset, kOperand, "'inf' is only allowed as a whole piece body");
    if (options_.params && !options_.params->count(id.text))
      throw SyntaxError(id.offset, kOperand,
                        "unknown identifier '" + id.text + "' (only '" + options_.var +
                            "' and declared parameters are allowed)");
    return Expr::param(id.text);
  }
  fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected token '" + t.text + "'", kOperand);
}

// inverse[t -> fwd on (lo, hi)](arg) and integral[t -> f from lo](arg), as
// printed for implicit pieces.
Expr Parser::bound(bool inverse) {
  expect_sym("[");
  if (peek().kind != Tok::Ident) fail("expected a bound variable", {"identifier"});
  std::string name = next().text;
  expect_sym("->");
  std::string outer = options_.var;
  options_.var = name;
  Expr body = expr();
  options_.var = outer;
  auto keyword = [&](std::string_view k) {
    if (!at_ident(k)) fail("expected '" + std::string(k) + "'", {std::string(k)});
    next();
  };
  auto end = [&](bool upper) -> std::optional<Expr> {
    if (upper && at_ident("inf")) {
      next();
      return std::nullopt;
    }
    if (!upper && at_sym("-") && peek(1).kind == Tok::Ident && peek(1).text == "inf") {
      next();
      next();
      return std::nullopt;
    }
    return expr();
  };
  if (inverse) {
    keyword("on");
    expect_sym("(");
    std::optional<Expr> lo = end(false);
    expect_sym(",");
    std::optional<Expr> hi = end(true);
    expect_sym(")");
    expect_sym("]");
    expect_sym("(");
    Expr arg = expr();
    expect_sym(")");
    return Expr::implicit(body, arg, lo, hi);
  }
  keyword("from");
  Expr lower = expr();
  expect_sym("]");
  expect_sym("(");
  Expr arg = expr();
  expect_sym(")");
  return Expr::integral(body, lower, arg);
}

}  // namespace symop::detail

namespace symop {

Expr parse_expr(std::string_view text, const ParseOptions& options) {
  detail::Parser p(text, options);
  Expr e = p.expr();
  p.expect_end();
  return e;
}

}  // namespace symop
