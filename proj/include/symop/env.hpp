#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "symop/expr.hpp"
#include "symop/simplify.hpp"

namespace symop {

enum class Ordering { Less, Equal, Greater, Undecidable };

const char* ordering_name(Ordering o);

// Order facts among parameter-affine expressions. Each fact is stored as
// d < 0 or d <= 0 with d = lhs - rhs.
class AssumptionEnv {
 public:
  struct Fact {
    ParamAffine d;
    bool strict;
    std::string text;
  };

  AssumptionEnv() = default;

  // lhs < rhs (strict) or lhs <= rhs.
  void assume(const Expr& lhs, const Expr& rhs, bool strict);
  // "0<l", "a >= b", "0 < a < 1".
  void assume(std::string_view text);
  void add_fact(const Fact& f);

  const std::vector<Fact>& facts() const { return facts_; }
  std::set<std::string> params() const;
  bool empty() const { return facts_.empty(); }

  // Throws InconsistentEnv when the facts admit no solution.
  void check_consistent() const;

  Ordering compare(const Expr& a, const Expr& b) const;
  // compare, but Undecidable raises UndecidableComparison.
  Ordering order(const Expr& a, const Expr& b) const;
  // Sign of e (-1, 0, 1) or UndecidableComparison.
  int sign(const Expr& e) const;
  std::optional<int> try_sign(const Expr& e) const;
  // True when e <= 0 (or e < 0 if strict) follows from the facts.
  bool proves_nonpositive(const Expr& e, bool strict) const;

  // An exact assignment satisfying every fact (strictly where possible),
  // covering the given parameters as well as those in the facts.
  ExactParams witness(const std::set<std::string>& extra = {}) const;

 private:
  bool infeasible_with(const std::vector<Fact>& extra) const;
  std::optional<int> structural_sign(const Expr& e) const;
  std::vector<Fact> facts_;
};

// Facts of both environments (InconsistentEnv if they clash).
AssumptionEnv merge(const AssumptionEnv& a, const AssumptionEnv& b);

}  // namespace symop
