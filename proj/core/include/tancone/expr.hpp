#pragma once

// Scalar expressions of n real variables.
//
// Grammar (see docs/grammar.md):
//   expr    := term  (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ['^' INTEGER]
//   primary := NUMBER | IDENT | FUNC '(' expr ')' | '(' expr ')'
//   FUNC    := sin | cos | exp
//
// Power binds tighter than unary minus, so "-x1^2" is -(x1^2).

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tancone/vec.hpp"

namespace tancone {

enum class ParseErrorKind { UnexpectedToken, UnexpectedEnd, UnknownIdentifier, BadExponent };

std::string_view to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t position, std::string token);

  ParseErrorKind kind() const noexcept { return kind_; }
  /// Character offset into the parsed text; at most text.size() (end of input).
  std::size_t position() const noexcept { return position_; }
  /// Offending token text (identifier name for UnknownIdentifier).
  const std::string& token() const noexcept { return token_; }

 private:
  ParseErrorKind kind_;
  std::size_t position_;
  std::string token_;
};

enum class OpCode : std::uint8_t {
  Constant,
  Variable,
  Negate,
  Add,
  Subtract,
  Multiply,
  Divide,
  PowInt,
  Sin,
  Cos,
  Exp,
};

/// One instruction of the postfix program. `index` holds the variable index
/// for Variable and the (nonnegative) exponent for PowInt.
struct Node {
  OpCode op = OpCode::Constant;
  double value = 0.0;
  int index = 0;
};

/// Per-scalar-type arithmetic used by Expr::evaluate. Specialised for double
/// here and for the jet types in jet.hpp / taylor.cpp.
template <class T>
struct ScalarOps;

template <>
struct ScalarOps<double> {
  static double constant(const double& /*like*/, double c) { return c; }
  static double divide(double a, double b) {
    if (b == 0.0) throw DomainError("division by zero");
    return a / b;
  }
  static double pow_int(double a, int n) {
    double result = 1.0;
    double base = a;
    unsigned e = static_cast<unsigned>(n);
    while (e != 0U) {
      if ((e & 1U) != 0U) result *= base;
      e >>= 1U;
      if (e != 0U) base *= base;
    }
    return result;
  }
  static double sin(double a);
  static double cos(double a);
  static double exp(double a);
};

/// Immutable expression tree, stored as a validated postfix program.
class Expr {
 public:
  /// Validates the program: every variable index < arity, exponents >= 0, and
  /// the program leaves exactly one value on the stack.
  Expr(std::vector<Node> program, std::size_t arity);

  static Expr constant(double c, std::size_t arity);
  static Expr variable(std::size_t index, std::size_t arity);

  std::size_t arity() const noexcept { return arity_; }
  std::span<const Node> program() const noexcept { return program_; }

  /// Evaluates at a point of length arity(). Division by zero throws DomainError.
  double operator()(std::span<const double> point) const;

  /// Generic evaluation over any scalar type with a ScalarOps specialisation.
  /// `like` supplies the shape used to lift constants.
  template <class T>
  T evaluate(std::span<const T> vars, const T& like) const;

 private:
  std::vector<Node> program_;
  std::size_t arity_ = 0;
  std::size_t max_depth_ = 0;
};

/// Default positional names x1..xn.
std::vector<std::string> default_variable_names(std::size_t n, std::string_view prefix = "x");

/// Parses `text` with positional variable binding to `variables`.
/// Throws ParseError on malformed input and std::invalid_argument when the
/// variable names are not distinct identifiers.
Expr parse(std::string_view text, std::span<const std::string> variables);

/// Convenience overload: variables x1..xn.
Expr parse(std::string_view text, std::size_t arity);

/// Evaluates e at `point`; throws std::invalid_argument on a length mismatch
/// and DomainError on division by zero.
double eval(const Expr& e, std::span<const double> point);

/// Fully parenthesised text that parses back to an equal-valued expression.
std::string to_string(const Expr& e, std::span<const std::string> variables);
std::string to_string(const Expr& e);

// Builders for programmatic construction (used by tests and set factories).
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& a, int exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);

// ---------------------------------------------------------------------------

template <class T>
T Expr::evaluate(std::span<const T> vars, const T& like) const {
  using Ops = ScalarOps<T>;
  if (vars.size() != arity_) throw std::invalid_argument("Expr::evaluate: point length != arity");
  std::vector<T> stack;
  stack.reserve(max_depth_);
  for (const Node& node : program_) {
    switch (node.op) {
      case OpCode::Constant:
        stack.push_back(Ops::constant(like, node.value));
        break;
      case OpCode::Variable:
        stack.push_back(vars[static_cast<std::size_t>(node.index)]);
        break;
      case OpCode::Negate:
        stack.back() = -stack.back();
        break;
      case OpCode::Sin:
        stack.back() = Ops::sin(stack.back());
        break;
      case OpCode::Cos:
        stack.back() = Ops::cos(stack.back());
        break;
      case OpCode::Exp:
        stack.back() = Ops::exp(stack.back());
        break;
      case OpCode::PowInt:
        stack.back() = Ops::pow_int(stack.back(), node.index);
        break;
      default: {
        T rhs = std::move(stack.back());
        stack.pop_back();
        T& lhs = stack.back();
        switch (node.op) {
          case OpCode::Add:
            lhs = lhs + rhs;
            break;
          case OpCode::Subtract:
            lhs = lhs - rhs;
            break;
          case OpCode::Multiply:
            lhs = lhs * rhs;
            break;
          case OpCode::Divide:
            lhs = Ops::divide(lhs, rhs);
            break;
          default:
            break;
        }
      }
    }
  }
  return std::move(stack.back());
}

}  // namespace tancone
