#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "tancone/expr.hpp"

using namespace tancone;

namespace {

Expr random_expr(std::mt19937_64& rng, std::size_t arity, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  switch (pick(rng)) {
    case 0: return Expr::constant(std::uniform_real_distribution<double>(-3.0, 3.0)(rng), arity);
    case 1: return Expr::variable(std::uniform_int_distribution<std::size_t>(0, arity - 1)(rng), arity);
    case 2: return random_expr(rng, arity, depth - 1) + random_expr(rng, arity, depth - 1);
    case 3: return random_expr(rng, arity, depth - 1) - random_expr(rng, arity, depth - 1);
    case 4: return random_expr(rng, arity, depth - 1) * random_expr(rng, arity, depth - 1);
    case 5: return random_expr(rng, arity, depth - 1) / random_expr(rng, arity, depth - 1);
    case 6: return -random_expr(rng, arity, depth - 1);
    case 7: return pow(random_expr(rng, arity, depth - 1), std::uniform_int_distribution<int>(0, 4)(rng));
    case 8: return sin(random_expr(rng, arity, depth - 1));
    default: return std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? cos(random_expr(rng, arity, depth - 1))
                                                                      : exp(random_expr(rng, arity, depth - 1));
  }
}

// Same value, same NaN-ness, or both throw.
void check_same_value(const Expr& a, const Expr& b, const std::vector<double>& x) {
  bool aThrew = false;
  bool bThrew = false;
  double va = 0.0;
  double vb = 0.0;
  try {
    va = eval(a, x);
  } catch (const DomainError&) {
    aThrew = true;
  }
  try {
    vb = eval(b, x);
  } catch (const DomainError&) {
    bThrew = true;
  }
  REQUIRE(aThrew == bThrew);
  if (aThrew) return;
  if (std::isnan(va)) {
    CHECK(std::isnan(vb));
  } else {
    CHECK(va == vb);
  }
}

ParseErrorKind error_kind(std::string_view text, std::size_t arity, std::size_t* position = nullptr) {
  try {
    (void)parse(text, arity);
  } catch (const ParseError& e) {
    if (position != nullptr) *position = e.position();
    return e.kind();
  }
  FAIL("expected a parse error for '" << std::string(text) << "'");
  return ParseErrorKind::UnexpectedToken;
}

}  // namespace

TEST_CASE("parse and evaluate basic arithmetic") {
  const std::vector<double> x{2.0, 3.0};
  CHECK(eval(parse("x1 + x2", 2), x) == 5.0);
  CHECK(eval(parse("x1 - x2 - 1", 2), x) == -2.0);
  CHECK(eval(parse("x1 * x2 / 4", 2), x) == 1.5);
  CHECK(eval(parse("x1^3", 2), x) == 8.0);
  CHECK(eval(parse("x2^0", 2), x) == 1.0);
  CHECK(eval(parse("(x1 + x2)^2", 2), x) == 25.0);
  CHECK(eval(parse("2.5e1", 2), x) == 25.0);
  CHECK(eval(parse(".5 * x1", 2), x) == 1.0);
  CHECK(eval(parse("sin(x1) + cos(x2) + exp(x1)", 2), x) ==
        doctest::Approx(std::sin(2.0) + std::cos(3.0) + std::exp(2.0)).epsilon(1e-15));
}

TEST_CASE("precedence and associativity") {
  const std::vector<double> x{2.0, 3.0};
  CHECK(eval(parse("-x1^2", 2), x) == -4.0);
  CHECK(eval(parse("(-x1)^2", 2), x) == 4.0);
  CHECK(eval(parse("1 + 2 * 3", 2), x) == 7.0);
  CHECK(eval(parse("8 / 4 / 2", 2), x) == 1.0);
  CHECK(eval(parse("8 - 4 - 2", 2), x) == 2.0);
  CHECK(eval(parse("2 * x1^2", 2), x) == 8.0);
  CHECK(eval(parse("--x1", 2), x) == 2.0);
  CHECK(eval(parse("x1 * -x2", 2), x) == -6.0);
}

TEST_CASE("named variables bind by position") {
  const std::vector<std::string> names{"x", "y"};
  const Expr e = parse("x - 2*y", names);
  CHECK(eval(e, std::vector<double>{1.0, 5.0}) == -9.0);
  CHECK_THROWS_AS(parse("x", std::vector<std::string>{"a", "a"}), std::invalid_argument);
}

TEST_CASE("parse errors carry kind and position") {
  std::size_t pos = 0;
  CHECK(error_kind("x1 +", 2, &pos) == ParseErrorKind::UnexpectedEnd);
  CHECK(pos == 4);
  CHECK(error_kind("", 1) == ParseErrorKind::UnexpectedEnd);
  CHECK(error_kind("x3", 2, &pos) == ParseErrorKind::UnknownIdentifier);
  CHECK(pos == 0);
  CHECK(error_kind("tan(x1)", 1) == ParseErrorKind::UnknownIdentifier);
  CHECK(error_kind("x1^2.5", 1) == ParseErrorKind::BadExponent);
  CHECK(error_kind("x1^-1", 1) == ParseErrorKind::BadExponent);
  CHECK(error_kind("x1^x1", 1) == ParseErrorKind::BadExponent);
  CHECK(error_kind("x1^2^3", 1) == ParseErrorKind::UnexpectedToken);
  CHECK(error_kind("(x1", 1) == ParseErrorKind::UnexpectedEnd);
  CHECK(error_kind("x1)", 1, &pos) == ParseErrorKind::UnexpectedToken);
  CHECK(pos == 2);
  CHECK(error_kind("x1 $ 2", 1) == ParseErrorKind::UnexpectedToken);
  CHECK(error_kind("sin x1", 1) == ParseErrorKind::UnexpectedToken);
}

TEST_CASE("evaluation errors") {
  const Expr e = parse("1 / x1", 1);
  CHECK_THROWS_AS(eval(e, std::vector<double>{0.0}), DomainError);
  CHECK_THROWS_AS(eval(e, std::vector<double>{1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(Expr({Node{OpCode::Variable, 0.0, 3}}, 2), std::invalid_argument);
  CHECK_THROWS_AS(Expr({Node{OpCode::Add, 0.0, 0}}, 2), std::invalid_argument);
}

TEST_CASE("to_string round trip on random expressions") {
  std::mt19937_64 rng(20261017);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t arity = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    const Expr e = random_expr(rng, arity, 5);
    const std::string text = to_string(e);
    CAPTURE(text);
    const Expr back = parse(text, arity);
    CHECK(to_string(back) == text);
    for (int p = 0; p < 5; ++p) {
      std::vector<double> x(arity);
      for (double& v : x) v = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
      check_same_value(e, back, x);
    }
  }
}

TEST_CASE("default variable names") {
  const std::vector<std::string> names = default_variable_names(3);
  REQUIRE(names.size() == 3);
  CHECK(names[0] == "x1");
  CHECK(names[2] == "x3");
}
