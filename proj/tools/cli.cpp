#include "cli.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "format.hpp"
#include "symop/conv.hpp"
#include "symop/oracle.hpp"
#include "symop/penalty.hpp"
#include "symop/risk.hpp"
#include "symop/sep.hpp"

namespace symop::cli {

namespace {

struct Context {
  AssumptionEnv env;
  ExactParams params;
  ParseOptions options;
  Expr lambda = Expr::integer(1);
  bool json = false;
  std::ostream* out = nullptr;
};

std::string fmt_double(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

bool is_separable(const std::string& text) { return text.find(";;") != std::string::npos; }

void emit(const Context& c, const PiecewiseFunction& f) {
  if (c.json)
    *c.out << to_json(f, c.params).dump(2) << "\n";
  else
    *c.out << text(rows(f));
}

void emit(const Context& c, const MonotoneOperator& t) {
  if (c.json)
    *c.out << to_json(t, c.params).dump(2) << "\n";
  else
    *c.out << text(rows(t));
}

void emit(const Context& c, const SeparableFunction& f) {
  if (c.json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& g : f.coords) j.push_back(to_json(g, c.params));
    *c.out << j.dump(2) << "\n";
    return;
  }
  for (std::size_t i = 0; i < f.coords.size(); ++i) {
    *c.out << "coordinate " << i + 1 << ":\n";
    for (const auto& r : rows(f.coords[i])) *c.out << "  " << r << "\n";
  }
}

// Symbolic value plus its evaluation when the parameters allow one.
void emit_value(const Context& c, const std::string& label, const ExtExpr& v) {
  std::string sym = v.is_finite() ? v.expr().str() : (v.is_pos_inf() ? "inf" : "-inf");
  std::string num = numstr(v, c.params);
  std::optional<double> approx;
  if (v.is_finite()) {
    try {
      approx = eval(v.expr(), ExtReal(0), c.params).to_double();
    } catch (const Error&) {
    }
  }
  if (c.json) {
    nlohmann::json j = {{"kind", "value"}, {"label", label}, {"expr", sym}, {"value", num}};
    *c.out << j.dump(2) << "\n";
    return;
  }
  *c.out << label << " = " << sym;
  if (approx && num != sym) *c.out << " = " << fmt_double(*approx);
  *c.out << "\n";
}

ExtReal parse_point(const Context& c, const std::string& s) {
  std::string t = s;
  t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
  if (t == "inf" || t == "+inf") return ExtReal::pos_inf();
  if (t == "-inf") return ExtReal::neg_inf();
  Expr e = parse_expr(s, c.options);
  if (e.has_var()) throw Error(ErrorCode::Domain, "point '" + s + "' must not contain the variable");
  return eval(e, ExtReal(0), c.params);
}

std::string set_text(const SetValue& v, const ExactParams& params) {
  if (v.is_empty()) return "empty";
  if (v.is_all()) return "all";
  if (v.is_point()) return "{" + numstr(v.lo(), params) + "}";
  return "[" + numstr(v.lo(), params) + ", " + numstr(v.hi(), params) + "]";
}

NumericParams numeric_params(const Context& c, const std::set<std::string>& extra) {
  NumericParams np = to_numeric(c.env.witness(extra));
  for (const auto& [k, v] : c.params) np[k] = v.get_d();
  return np;
}

bool looks_like_operator(const std::string& s) {
  auto i = s.find_first_not_of(" \t\n");
  return i != std::string::npos && s.compare(i, 2, "sd") == 0;
}

// Symbolic conjugate against the grid oracle and symbolic prox against the
// golden-section oracle.
int verify(const Context& c, const std::string& src, std::size_t n) {
  PiecewiseFunction f = parse_pwf(src, c.env, c.options);
  PiecewiseFunction g = conjugate(f);
  MonotoneOperator s = subdifferential(f);
  MonotoneOperator p = prox(f, c.lambda);
  std::set<std::string> names;
  for (const auto& name : c.env.params()) names.insert(name);
  NumericParams np = numeric_params(c, names);
  double lambda = eval_double(c.lambda, 0, np);
  const double lo = -10, hi = 10, h = (hi - lo) / static_cast<double>(n - 1);

  std::vector<oracle::GraphPoint> graph;
  for (const auto& q : oracle::sample_graph(s, 8, np, lo, hi))
    if (q.x >= lo && q.x <= hi && std::isfinite(q.u)) graph.push_back(q);
  double slope = 0;
  for (const auto& q : graph) slope = std::max(slope, std::fabs(q.u));
  bool ok = true;
  double worst_conj = 0, worst_prox = 0;
  std::size_t step = std::max<std::size_t>(1, graph.size() / 20);
  nlohmann::json checks = nlohmann::json::array();
  for (std::size_t i = 0; i < graph.size(); i += step) {
    double y = graph[i].u;
    double sym = eval_pwf_double(g, y, np);
    double grid = oracle::grid_conjugate(f, y, lo, hi, n, np);
    double tol = std::max(1e-6, h * (std::fabs(y) + slope));
    double err = std::fabs(sym - grid);
    worst_conj = std::max(worst_conj, err);
    if (err > tol) ok = false;
    checks.push_back({{"check", "conjugate"}, {"at", y}, {"symbolic", sym}, {"oracle", grid}, {"tol", tol}});
  }
  for (int i = 0; i < 21; ++i) {
    double x = -5 + 0.5 * i;
    NumericSet v = eval_op_double(p, x, np);
    double num = oracle::numeric_prox(f, x, lambda, 1e-10, np);
    double err = v.empty() ? INFINITY : std::max({0.0, v.lo - num, num - v.hi});
    worst_prox = std::max(worst_prox, err);
    if (err > 1e-6) ok = false;
    checks.push_back({{"check", "prox"}, {"at", x}, {"symbolic", v.lo}, {"oracle", num}, {"tol", 1e-6}});
  }
  if (c.json) {
    nlohmann::json j = {{"kind", "verify"}, {"pass", ok}, {"max_conjugate_error", worst_conj},
                        {"max_prox_error", worst_prox}, {"checks", checks}};
    *c.out << j.dump(2) << "\n";
  } else {
    *c.out << "conjugate vs grid (" << n << " points): max error " << fmt_double(worst_conj) << "\n";
    *c.out << "prox vs golden section: max error " << fmt_double(worst_prox) << "\n";
    *c.out << (ok ? "pass" : "FAIL") << "\n";
  }
  return ok ? 0 : 3;
}

int report_error(const Context& c, std::ostream& err, const Error& e) {
  nlohmann::json j = {{"error", error_name(e.code())}, {"message", e.message()}};
  err << "error: " << e.what() << "\n";
  if (auto* se = dynamic_cast<const SyntaxError*>(&e)) {
    j["offset"] = se->offset();
    j["expected"] = se->expected();
  }
  if (auto* ne = dynamic_cast<const NonConvexError*>(&e)) {
    const auto& w = ne->witness();
    j["witness"] = {w[0], w[1], w[2]};
    err << "  witness: " << fmt_double(w[0]) << " < " << fmt_double(w[1]) << " < " << fmt_double(w[2]) << "\n";
  }
  if (c.json && c.out) *c.out << j.dump(2) << "\n";
  return is_internal(e.code()) ? 3 : 2;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symbolic convex analysis on the real line", "symop"};
  app.require_subcommand(1);
  app.fallthrough();
  std::vector<std::string> assumptions, param_specs;
  std::string lambda_text = "1";
  bool json = false;
  app.add_option("--assume", assumptions, "assumption on parameters, e.g. \"0 < l\"")
      ->expected(1)
      ->allow_extra_args(false)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--param", param_specs, "parameter value, e.g. l=1/2")
      ->expected(1)
      ->allow_extra_args(false)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--lambda", lambda_text, "step size for prox and resolvent");
  app.add_flag("--json", json, "machine-readable output");

  std::string input, point, cdf, quantile_text, what, level, at;
  bool check = false;
  std::size_t grid = 100000;
  auto* subdiff_cmd = app.add_subcommand("subdiff", "subdifferential of a function");
  subdiff_cmd->add_option("f", input)->required();
  auto* conj_cmd = app.add_subcommand("conj", "Fenchel conjugate (\";;\" separates coordinates)");
  conj_cmd->add_option("f", input)->required();
  auto* biconj_cmd = app.add_subcommand("biconj", "conjugate of the conjugate");
  biconj_cmd->add_option("f", input)->required();
  auto* prox_cmd = app.add_subcommand("prox", "proximity operator");
  prox_cmd->add_option("f", input)->required();
  prox_cmd->add_option("--at", at, "evaluate at a comma-separated point");
  auto* invert_cmd = app.add_subcommand("invert", "inverse of a monotone operator");
  invert_cmd->add_option("T", input)->required();
  auto* resolvent_cmd = app.add_subcommand("resolvent", "resolvent (I + lambda T)^-1");
  resolvent_cmd->add_option("T", input)->required();
  auto* extend_cmd = app.add_subcommand("extend", "maximal monotone extension");
  extend_cmd->add_option("T", input)->required();
  auto* penalty_cmd = app.add_subcommand("penalty", "penalty f with gph T inside gph prox f");
  penalty_cmd->add_option("T", input)->required();
  penalty_cmd->add_flag("--verify", check, "also check gph T against gph prox f");
  auto* risk_cmd = app.add_subcommand("risk", "superexpectation, superquantile and friends");
  auto* cdf_opt = risk_cmd->add_option("--cdf", cdf, "distribution function");
  auto* q_opt = risk_cmd->add_option("--quantile", quantile_text, "quantile function of p");
  cdf_opt->excludes(q_opt);
  risk_cmd->add_option("what", what)->required()->check(
      CLI::IsMember({"superexp", "superdist", "superq", "cvar", "quantile"}));
  risk_cmd->add_option("p", level);
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a function or operator");
  eval_cmd->add_option("f", input)->required();
  eval_cmd->add_option("x", point)->required();
  auto* verify_cmd = app.add_subcommand("verify", "cross-check a function against the numeric oracles");
  verify_cmd->add_option("f", input)->required();
  verify_cmd->add_option("--grid", grid, "grid points for the conjugate oracle");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Context c;
  c.json = json;
  c.out = &out;
  try {
    for (const auto& a : assumptions) c.env.assume(a);
    for (const auto& spec : param_specs) {
      auto eq = spec.find('=');
      if (eq == std::string::npos) throw SyntaxError(0, {"name=value"}, "malformed --param '" + spec + "'");
      std::string name = spec.substr(0, eq);
      name.erase(std::remove(name.begin(), name.end(), ' '), name.end());
      Rational v = parse_rational(spec.substr(eq + 1));
      c.params[name] = v;
      c.env.assume(Expr::param(name), Expr::rational(v), false);
      c.env.assume(Expr::rational(v), Expr::param(name), false);
    }
    std::set<std::string> declared;
    for (const auto& name : c.env.params()) declared.insert(name);
    c.options.params = declared;
    c.lambda = parse_expr(lambda_text, c.options);

    if (subdiff_cmd->parsed()) {
      emit(c, subdifferential(parse_pwf(input, c.env, c.options)));
    } else if (conj_cmd->parsed()) {
      if (is_separable(input))
        emit(c, separable_conjugate(parse_separable(input, c.env, c.options)));
      else
        emit(c, conjugate(parse_pwf(input, c.env, c.options)));
    } else if (biconj_cmd->parsed()) {
      emit(c, biconjugate(parse_pwf(input, c.env, c.options)));
    } else if (prox_cmd->parsed()) {
      if (!at.empty() || is_separable(input)) {
        SeparableFunction f = parse_separable(input, c.env, c.options);
        if (at.empty()) {
          for (std::size_t i = 0; i < f.coords.size(); ++i) {
            out << "coordinate " << i + 1 << ":\n";
            for (const auto& r : rows(prox(f.coords[i], c.lambda))) out << "  " << r << "\n";
          }
          return 0;
        }
        std::vector<ExtReal> x;
        std::stringstream ss(at);
        for (std::string item; std::getline(ss, item, ',');) x.push_back(parse_point(c, item));
        std::vector<SetValue> v = separable_prox(f, c.lambda, x, c.params);
        if (json) {
          nlohmann::json j = {{"kind", "point_values"}, {"values", nlohmann::json::array()}};
          for (const auto& s : v) j["values"].push_back(set_text(s, c.params));
          out << j.dump(2) << "\n";
        } else {
          for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << set_text(v[i], c.params);
          out << "\n";
        }
      } else {
        emit(c, prox(parse_pwf(input, c.env, c.options), c.lambda));
      }
    } else if (invert_cmd->parsed()) {
      emit(c, invert(parse_operator(input, c.env, c.options)));
    } else if (resolvent_cmd->parsed()) {
      emit(c, resolvent(parse_operator(input, c.env, c.options), c.lambda));
    } else if (extend_cmd->parsed()) {
      emit(c, maximal_extension(parse_operator(input, c.env, c.options)));
    } else if (penalty_cmd->parsed()) {
      MonotoneOperator t = parse_operator(input, c.env, c.options);
      PiecewiseFunction f = recover_penalty(t);
      emit(c, f);
      if (check) {
        PenaltyReport r = verify_penalty(t, f);
        if (json)
          out << nlohmann::json({{"kind", "penalty_check"}, {"pass", r.pass}, {"max_violation", r.max_violation},
                                 {"samples", r.samples}})
                     .dump(2)
              << "\n";
        else
          out << (r.pass ? "pass" : "FAIL") << ": max violation " << fmt_double(r.max_violation) << " over "
              << r.samples << " graph points\n";
        if (!r.pass) return 3;
      }
    } else if (risk_cmd->parsed()) {
      if (cdf.empty() == quantile_text.empty())
        throw SyntaxError(0, {"--cdf", "--quantile"}, "risk needs exactly one of --cdf and --quantile");
      DistributionSpec d;
      if (!cdf.empty()) {
        d = cdf_distribution(cdf, c.env, c.options);
      } else {
        ParseOptions qo = c.options;
        qo.var = "p";
        d = quantile_distribution(quantile_text, c.env, qo);
      }
      bool needs_p = what == "superq" || what == "cvar" || what == "quantile";
      if (needs_p && level.empty()) throw SyntaxError(0, {"level p"}, "'" + what + "' needs a level p");
      if (what == "superexp") {
        emit(c, superexpectation(d));
      } else if (what == "superdist") {
        emit(c, superdistribution(d));
      } else {
        Expr p = parse_expr(level, c.options);
        ExtExpr v = what == "quantile" ? quantile(d, p) : superquantile(d, p);
        emit_value(c, what + "(" + p.str() + ")", v);
      }
    } else if (eval_cmd->parsed()) {
      ExtReal x = parse_point(c, point);
      if (looks_like_operator(input)) {
        SetValue v = eval_op(parse_operator(input, c.env, c.options), x, c.params);
        if (json)
          out << nlohmann::json({{"kind", "set"}, {"x", x.numstr()}, {"value", set_text(v, c.params)}}).dump(2)
              << "\n";
        else
          out << set_text(v, c.params) << "\n";
      } else {
        ExtReal v = eval_pwf(parse_pwf(input, c.env, c.options), x, c.params);
        if (json)
          out << nlohmann::json({{"kind", "value"}, {"x", x.numstr()}, {"value", v.numstr()}}).dump(2) << "\n";
        else
          out << v.numstr() << "\n";
      }
    } else if (verify_cmd->parsed()) {
      if (grid < 2) throw Error(ErrorCode::Domain, "--grid needs at least 2 points");
      return verify(c, input, grid);
    }
  } catch (const Error& e) {
    return report_error(c, err, e);
  } catch (const std::exception& e) {
    err << "error: InternalInconsistency: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace symop::cli
