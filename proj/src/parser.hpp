#pragma once

// Shared tokenizer/recursive-descent core for the expression grammar and the
// piecewise DSLs built on top of it.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symop/error.hpp"
#include "symop/expr.hpp"

namespace symop::detail {

enum class Tok { Int, Decimal, Ident, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t offset = 0;
};

class Parser {
 public:
  Parser(std::string_view text, ParseOptions options);

  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool at_sym(std::string_view s) const;
  bool at_ident(std::string_view s) const;
  bool at_end() const { return peek().kind == Tok::End; }
  void expect_sym(std::string_view s);
  void expect_end();
  [[noreturn]] void fail(const std::string& detail, std::vector<std::string> expected) const;

  Expr expr();
  Expr term();
  Expr factor(bool lead = false);
  Expr base(bool lead = false);
  Expr bound(bool inverse);

  const ParseOptions& options() const { return options_; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  ParseOptions options_;
};

}  // namespace symop::detail
