#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "symop/monop.hpp"
#include "symop/pwf.hpp"

namespace symop::cli {

// One branch per breakpoint and per open cell, in order, written in the
// branch syntax of the input languages ("x < -l -> {x + l}").
std::vector<std::string> rows(const PiecewiseFunction& f);
std::vector<std::string> rows(const MonotoneOperator& t);
std::string text(const std::vector<std::string>& rows);

// Exact "p/q" when the value is a rational under params, 17 significant
// digits when it only evaluates numerically, the expression otherwise.
std::string numstr(const Expr& e, const ExactParams& params);
std::string numstr(const ExtExpr& e, const ExactParams& params);

nlohmann::json to_json(const PiecewiseFunction& f, const ExactParams& params = {});
nlohmann::json to_json(const MonotoneOperator& t, const ExactParams& params = {});

// Rebuilds the DSL text of an object written by to_json.
std::string dsl_from_json(const nlohmann::json& j);

}  // namespace symop::cli
