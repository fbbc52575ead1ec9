#include "format.hpp"

#include <algorithm>

namespace symop::cli {

namespace {

std::string cell_guard(const std::string& x, const std::vector<std::string>& bps, std::size_t i) {
  if (bps.empty()) return "-inf < " + x + " < inf";
  if (i == 0) return x + " < " + bps[0];
  if (i == bps.size()) return x + " > " + bps.back();
  return bps[i - 1] + " < " + x + " < " + bps[i];
}

std::vector<std::string> assemble(const std::string& x, const std::vector<Expr>& breakpoints,
                                  const std::vector<std::string>& cells, const std::vector<std::string>& points) {
  std::vector<std::string> bps;
  for (const auto& b : breakpoints) bps.push_back(b.str(x));
  std::vector<std::string> guards, values;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) {
      guards.push_back(x + " = " + bps[i - 1]);
      values.push_back(points[i - 1]);
    }
    guards.push_back(cell_guard(x, bps, i));
    values.push_back(cells[i]);
  }
  std::size_t width = 0;
  for (const auto& g : guards) width = std::max(width, g.size());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < guards.size(); ++i)
    out.push_back(guards[i] + std::string(width - guards[i].size(), ' ') + " -> " + values[i]);
  return out;
}

nlohmann::json interval_json(const std::vector<Expr>& bps, std::size_t i, const ExactParams& params) {
  return {{"lo", i == 0 ? std::string("-inf") : numstr(bps[i - 1], params)},
          {"hi", i == bps.size() ? std::string("inf") : numstr(bps[i], params)}};
}

std::string dsl_bound(const nlohmann::json& v) { return v.get<std::string>(); }

}  // namespace

std::vector<std::string> rows(const PiecewiseFunction& f) {
  std::vector<std::string> cells, points;
  for (const auto& p : f.pieces) cells.push_back(p.is_infinite() ? "inf" : p.body.str(f.var));
  for (const auto& v : f.values) points.push_back(v.is_finite() ? v.expr().str(f.var) : "inf");
  return assemble(f.var, f.breakpoints, cells, points);
}

std::vector<std::string> rows(const MonotoneOperator& t) {
  std::vector<std::string> cells, points;
  for (const auto& p : t.pieces) cells.push_back(p.is_empty() ? "empty" : "{" + p.body.str(t.var) + "}");
  for (const auto& v : t.values) points.push_back(v.str(t.var));
  return assemble(t.var, t.breakpoints, cells, points);
}

std::string text(const std::vector<std::string>& rows) {
  std::string s;
  for (const auto& r : rows) s += r + "\n";
  return s;
}

std::string numstr(const Expr& e, const ExactParams& params) {
  try {
    ExtReal v = eval(e, ExtReal(0), params);
    if (!e.has_var()) return v.numstr();
  } catch (const Error&) {
  }
  return e.str();
}

std::string numstr(const ExtExpr& e, const ExactParams& params) {
  if (e.is_pos_inf()) return "inf";
  if (e.is_neg_inf()) return "-inf";
  return numstr(e.expr(), params);
}

nlohmann::json to_json(const PiecewiseFunction& f, const ExactParams& params) {
  nlohmann::json j;
  j["kind"] = "pwf";
  j["var"] = f.var;
  j["breakpoints"] = nlohmann::json::array();
  for (const auto& b : f.breakpoints) j["breakpoints"].push_back(numstr(b, params));
  j["pieces"] = nlohmann::json::array();
  for (std::size_t i = 0; i < f.pieces.size(); ++i) {
    const Piece& p = f.pieces[i];
    j["pieces"].push_back({{"interval", interval_json(f.breakpoints, i, params)},
                           {"kind", kind_name(p.kind)},
                           {"expr", p.is_infinite() ? std::string("inf") : p.body.str(f.var)}});
  }
  j["at_breakpoints"] = nlohmann::json::array();
  for (std::size_t k = 0; k < f.breakpoints.size(); ++k) {
    std::string v = numstr(f.values[k], params);
    j["at_breakpoints"].push_back(
        {{"x", numstr(f.breakpoints[k], params)}, {"value", {{"type", "point"}, {"lo", v}, {"hi", v}}}});
  }
  return j;
}

nlohmann::json to_json(const MonotoneOperator& t, const ExactParams& params) {
  nlohmann::json j;
  j["kind"] = "op";
  j["var"] = t.var;
  j["breakpoints"] = nlohmann::json::array();
  for (const auto& b : t.breakpoints) j["breakpoints"].push_back(numstr(b, params));
  j["pieces"] = nlohmann::json::array();
  for (std::size_t i = 0; i < t.pieces.size(); ++i) {
    const OpPiece& p = t.pieces[i];
    j["pieces"].push_back({{"interval", interval_json(t.breakpoints, i, params)},
                           {"kind", kind_name(p.kind)},
                           {"expr", p.is_empty() ? std::string("empty") : p.body.str(t.var)}});
  }
  j["at_breakpoints"] = nlohmann::json::array();
  for (std::size_t k = 0; k < t.breakpoints.size(); ++k) {
    const SetValue& v = t.values[k];
    nlohmann::json val;
    if (v.is_empty()) {
      val = {{"type", "empty"}};
    } else if (v.is_all()) {
      val = {{"type", "all"}};
    } else {
      val = {{"type", v.is_point() ? "point" : "interval"}, {"lo", numstr(v.lo(), params)}, {"hi", numstr(v.hi(), params)}};
    }
    j["at_breakpoints"].push_back({{"x", numstr(t.breakpoints[k], params)}, {"value", val}});
  }
  return j;
}

std::string dsl_from_json(const nlohmann::json& j) {
  bool op = j.at("kind") == "op";
  std::string x = j.at("var");
  const auto& pieces = j.at("pieces");
  const auto& at = j.at("at_breakpoints");
  auto piece_text = [&](const nlohmann::json& p) {
    std::string e = p.at("expr");
    if (!op || e == "empty") return e;
    return "{" + e + "}";
  };
  if (pieces.size() == 1) {
    std::string e = pieces[0].at("expr");
    if (op && e == "empty") return "sd{ " + x + " < 0 -> empty ; " + x + " >= 0 -> empty }";
    return e;
  }
  std::string s = op ? "sd{ " : "pw{ ";
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& iv = pieces[i].at("interval");
    std::string lo = iv.at("lo"), hi = iv.at("hi");
    std::string guard = lo == "-inf" ? x + " < " + hi : hi == "inf" ? x + " > " + lo : lo + " < " + x + " < " + hi;
    if (i > 0) {
      const auto& b = at[i - 1];
      const auto& v = b.at("value");
      std::string type = v.at("type");
      std::string val;
      if (!op)
        val = v.at("lo");
      else if (type == "empty" || type == "all")
        val = type;
      else
        val = "[" + dsl_bound(v.at("lo")) + ", " + dsl_bound(v.at("hi")) + "]";
      s += x + " = " + b.at("x").get<std::string>() + " -> " + val + " ; ";
    }
    s += guard + " -> " + piece_text(pieces[i]);
    if (i + 1 < pieces.size()) s += " ; ";
  }
  return s + " }";
}

}  // namespace symop::cli
