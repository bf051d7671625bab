#include <stdexcept>

#include <fmt/format.h>

#include "tancone/setmodels.hpp"

namespace tancone {

namespace {

std::vector<Expr> exprs(std::initializer_list<std::string_view> texts, std::size_t arity) {
  const auto names = arity == 1 ? std::vector<std::string>{"s"} : default_variable_names(arity);
  std::vector<Expr> out;
  for (std::string_view t : texts) out.push_back(parse(t, names));
  return out;
}

}  // namespace

std::vector<std::string> benchmark_set_names() { return {"cusp", "cusp-implicit", "half-plane", "parabola", "plane"}; }

SetDesc benchmark_set(std::string_view name) {
  SetDesc q;
  if (name == "cusp") {
    // {x1 >= 0, x1^2 = x2^3} traced by s -> (s^3, s^2).
    q = make_parametric(exprs({"s^3", "s^2"}, 1), 0.0, 2.0);
  } else if (name == "cusp-implicit") {
    q = make_implicit(2, exprs({"x1^2 - x2^3"}, 2), exprs({"-x1"}, 2));
  } else if (name == "half-plane") {
    q = make_implicit(2, {}, exprs({"-x1"}, 2));
  } else if (name == "parabola") {
    q = make_parametric(exprs({"s", "s^2"}, 1), -2.0, 2.0);
  } else if (name == "plane") {
    q = make_implicit(2, {}, {});
  } else {
    throw std::invalid_argument(fmt::format("unknown benchmark set '{}'", name));
  }
  q.name = std::string(name);
  return q;
}

}  // namespace tancone
