#include "symop/sep.hpp"

#include "symop/conv.hpp"

namespace symop {

namespace {

template <class F>
auto per_coordinate(std::size_t j, F&& fn) {
  try {
    return fn();
  } catch (const SyntaxError&) {
    throw;
  } catch (const Error& e) {
    throw Error(e.code(), "coordinate " + std::to_string(j + 1) + ": " + e.message());
  }
}

}  // namespace

SeparableFunction parse_separable(std::string_view text, const AssumptionEnv& env, const ParseOptions& options) {
  SeparableFunction f;
  if (text.find_first_not_of(" \t\n") == std::string_view::npos) return f;
  std::size_t start = 0;
  for (;;) {
    std::size_t end = text.find(";;", start);
    std::string_view part = text.substr(start, end == std::string_view::npos ? end : end - start);
    std::size_t j = f.coords.size();
    f.coords.push_back(per_coordinate(j, [&] { return parse_pwf(part, env, options); }));
    if (end == std::string_view::npos) break;
    start = end + 2;
  }
  return f;
}

SeparableFunction separable_conjugate(const SeparableFunction& f) {
  SeparableFunction g;
  for (std::size_t j = 0; j < f.coords.size(); ++j)
    g.coords.push_back(per_coordinate(j, [&] { return conjugate(f.coords[j]); }));
  return g;
}

std::vector<SetValue> separable_prox(const SeparableFunction& f, const Expr& lambda, const std::vector<ExtReal>& x,
                                     const ExactParams& params) {
  if (x.size() != f.coords.size())
    throw Error(ErrorCode::DimensionMismatch, "point has " + std::to_string(x.size()) + " coordinates, function has " +
                                                  std::to_string(f.coords.size()));
  std::vector<SetValue> out;
  for (std::size_t j = 0; j < x.size(); ++j)
    out.push_back(per_coordinate(j, [&] { return eval_op(prox(f.coords[j], lambda), x[j], params); }));
  return out;
}

}  // namespace symop
