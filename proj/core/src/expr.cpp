#include "tancone/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <utility>

#include <fmt/format.h>

namespace tancone {

double ScalarOps<double>::sin(double a) { return std::sin(a); }
double ScalarOps<double>::cos(double a) { return std::cos(a); }
double ScalarOps<double>::exp(double a) { return std::exp(a); }

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::UnexpectedToken:
      return "unexpected token";
    case ParseErrorKind::UnexpectedEnd:
      return "unexpected end";
    case ParseErrorKind::UnknownIdentifier:
      return "unknown identifier";
    case ParseErrorKind::BadExponent:
      return "bad exponent";
  }
  return "parse error";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t position, std::string token)
    : std::runtime_error(fmt::format("{} at offset {}{}", to_string(kind), position,
                                     token.empty() ? std::string() : fmt::format(": '{}'", token))),
      kind_(kind),
      position_(position),
      token_(std::move(token)) {}

namespace {

int stack_effect(OpCode op) {
  switch (op) {
    case OpCode::Constant:
    case OpCode::Variable:
      return 1;
    case OpCode::Add:
    case OpCode::Subtract:
    case OpCode::Multiply:
    case OpCode::Divide:
      return -1;
    default:
      return 0;
  }
}

int arity_of(OpCode op) {
  switch (op) {
    case OpCode::Constant:
    case OpCode::Variable:
      return 0;
    case OpCode::Add:
    case OpCode::Subtract:
    case OpCode::Multiply:
    case OpCode::Divide:
      return 2;
    default:
      return 1;
  }
}

bool is_function_name(std::string_view s) { return s == "sin" || s == "cos" || s == "exp"; }

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  const auto first = static_cast<unsigned char>(s.front());
  if (std::isalpha(first) == 0 && first != '_') return false;
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) == 0 && u != '_') return false;
  }
  return true;
}

}  // namespace

Expr::Expr(std::vector<Node> program, std::size_t arity) : program_(std::move(program)), arity_(arity) {
  int depth = 0;
  int max_depth = 0;
  for (const Node& node : program_) {
    if (depth < arity_of(node.op)) throw std::invalid_argument("Expr: malformed postfix program");
    if (node.op == OpCode::Variable && (node.index < 0 || static_cast<std::size_t>(node.index) >= arity_)) {
      throw std::invalid_argument(fmt::format("Expr: variable index {} out of range for arity {}", node.index, arity_));
    }
    if (node.op == OpCode::PowInt && node.index < 0) throw std::invalid_argument("Expr: negative exponent");
    depth += stack_effect(node.op);
    max_depth = std::max(max_depth, depth);
  }
  if (depth != 1) throw std::invalid_argument("Expr: program must leave exactly one value");
  max_depth_ = static_cast<std::size_t>(max_depth);
}

Expr Expr::constant(double c, std::size_t arity) { return Expr({Node{OpCode::Constant, c, 0}}, arity); }

Expr Expr::variable(std::size_t index, std::size_t arity) {
  return Expr({Node{OpCode::Variable, 0.0, static_cast<int>(index)}}, arity);
}

double Expr::operator()(std::span<const double> point) const {
  if (point.size() != arity_) {
    throw std::invalid_argument(fmt::format("eval: point has length {}, expression arity is {}", point.size(), arity_));
  }
  // Small fixed buffer covers every expression the CLI realistically sees.
  constexpr std::size_t kInline = 64;
  std::array<double, kInline> inline_stack{};
  std::vector<double> heap_stack;
  double* stack = inline_stack.data();
  if (max_depth_ > kInline) {
    heap_stack.resize(max_depth_);
    stack = heap_stack.data();
  }
  std::size_t top = 0;
  for (const Node& node : program_) {
    switch (node.op) {
      case OpCode::Constant:
        stack[top++] = node.value;
        break;
      case OpCode::Variable:
        stack[top++] = point[static_cast<std::size_t>(node.index)];
        break;
      case OpCode::Negate:
        stack[top - 1] = -stack[top - 1];
        break;
      case OpCode::Sin:
        stack[top - 1] = std::sin(stack[top - 1]);
        break;
      case OpCode::Cos:
        stack[top - 1] = std::cos(stack[top - 1]);
        break;
      case OpCode::Exp:
        stack[top - 1] = std::exp(stack[top - 1]);
        break;
      case OpCode::PowInt:
        stack[top - 1] = ScalarOps<double>::pow_int(stack[top - 1], node.index);
        break;
      case OpCode::Add:
        --top;
        stack[top - 1] += stack[top];
        break;
      case OpCode::Subtract:
        --top;
        stack[top - 1] -= stack[top];
        break;
      case OpCode::Multiply:
        --top;
        stack[top - 1] *= stack[top];
        break;
      case OpCode::Divide:
        --top;
        if (stack[top] == 0.0) throw DomainError("division by zero");
        stack[top - 1] /= stack[top];
        break;
    }
  }
  return stack[0];
}

double eval(const Expr& e, std::span<const double> point) { return e(point); }

std::vector<std::string> default_variable_names(std::size_t n, std::string_view prefix) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(fmt::format("{}{}", prefix, i + 1));
  return names;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class TokenKind { Number, Identifier, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::size_t position = 0;
  std::string_view text;
  double number = 0.0;
  bool integral = false;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
    Token tok;
    tok.position = pos_;
    if (pos_ >= text_.size()) {
      tok.kind = TokenKind::End;
      return tok;
    }
    const char c = text_[pos_];
    const auto uc = static_cast<unsigned char>(c);
    if (std::isdigit(uc) != 0 || (c == '.' && pos_ + 1 < text_.size() &&
                                  std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) != 0)) {
      return lex_number();
    }
    if (std::isalpha(uc) != 0 || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) != 0 || text_[pos_] == '_')) {
        ++pos_;
      }
      tok.kind = TokenKind::Identifier;
      tok.text = text_.substr(start, pos_ - start);
      return tok;
    }
    ++pos_;
    tok.text = text_.substr(tok.position, 1);
    switch (c) {
      case '+':
        tok.kind = TokenKind::Plus;
        return tok;
      case '-':
        tok.kind = TokenKind::Minus;
        return tok;
      case '*':
        tok.kind = TokenKind::Star;
        return tok;
      case '/':
        tok.kind = TokenKind::Slash;
        return tok;
      case '^':
        tok.kind = TokenKind::Caret;
        return tok;
      case '(':
        tok.kind = TokenKind::LParen;
        return tok;
      case ')':
        tok.kind = TokenKind::RParen;
        return tok;
      default:
        throw ParseError(ParseErrorKind::UnexpectedToken, tok.position, std::string(tok.text));
    }
  }

 private:
  Token lex_number() {
    Token tok;
    tok.kind = TokenKind::Number;
    tok.position = pos_;
    const std::size_t start = pos_;
    bool integral = true;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      integral = false;
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look])) != 0) {
        integral = false;
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
      }
    }
    tok.text = text_.substr(start, pos_ - start);
    const auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), tok.number);
    if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) {
      throw ParseError(ParseErrorKind::UnexpectedToken, tok.position, std::string(tok.text));
    }
    tok.integral = integral;
    return tok;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> variables) : lexer_(text), variables_(variables) {
    advance();
  }

  std::vector<Node> parse_all() {
    parse_expr();
    if (current_.kind != TokenKind::End) fail_unexpected();
    return std::move(program_);
  }

 private:
  void advance() { current_ = lexer_.next(); }

  [[noreturn]] void fail_unexpected() const {
    if (current_.kind == TokenKind::End) {
      throw ParseError(ParseErrorKind::UnexpectedEnd, current_.position, "");
    }
    throw ParseError(ParseErrorKind::UnexpectedToken, current_.position, std::string(current_.text));
  }

  void emit(OpCode op, double value = 0.0, int index = 0) { program_.push_back(Node{op, value, index}); }

  void parse_expr() {
    parse_term();
    while (current_.kind == TokenKind::Plus || current_.kind == TokenKind::Minus) {
      const OpCode op = current_.kind == TokenKind::Plus ? OpCode::Add : OpCode::Subtract;
      advance();
      parse_term();
      emit(op);
    }
  }

  void parse_term() {
    parse_unary();
    while (current_.kind == TokenKind::Star || current_.kind == TokenKind::Slash) {
      const OpCode op = current_.kind == TokenKind::Star ? OpCode::Multiply : OpCode::Divide;
      advance();
      parse_unary();
      emit(op);
    }
  }

  void parse_unary() {
    if (current_.kind == TokenKind::Minus) {
      advance();
      parse_unary();
      emit(OpCode::Negate);
      return;
    }
    parse_power();
  }

  void parse_power() {
    parse_primary();
    if (current_.kind != TokenKind::Caret) return;
    advance();
    if (current_.kind == TokenKind::End) fail_unexpected();
    if (current_.kind != TokenKind::Number || !current_.integral || current_.number > 1e6) {
      throw ParseError(ParseErrorKind::BadExponent, current_.position, std::string(current_.text));
    }
    emit(OpCode::PowInt, 0.0, static_cast<int>(current_.number));
    advance();
    if (current_.kind == TokenKind::Caret) fail_unexpected();
  }

  void parse_primary() {
    switch (current_.kind) {
      case TokenKind::Number:
        emit(OpCode::Constant, current_.number);
        advance();
        return;
      case TokenKind::LParen:
        advance();
        parse_expr();
        if (current_.kind != TokenKind::RParen) fail_unexpected();
        advance();
        return;
      case TokenKind::Identifier:
        parse_identifier();
        return;
      default:
        fail_unexpected();
    }
  }

  void parse_identifier() {
    const Token ident = current_;
    if (is_function_name(ident.text)) {
      advance();
      if (current_.kind != TokenKind::LParen) fail_unexpected();
      advance();
      parse_expr();
      if (current_.kind != TokenKind::RParen) fail_unexpected();
      advance();
      emit(ident.text == "sin" ? OpCode::Sin : ident.text == "cos" ? OpCode::Cos : OpCode::Exp);
      return;
    }
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      if (variables_[i] == ident.text) {
        emit(OpCode::Variable, 0.0, static_cast<int>(i));
        advance();
        return;
      }
    }
    throw ParseError(ParseErrorKind::UnknownIdentifier, ident.position, std::string(ident.text));
  }

  Lexer lexer_;
  std::span<const std::string> variables_;
  Token current_;
  std::vector<Node> program_;
};

}  // namespace

Expr parse(std::string_view text, std::span<const std::string> variables) {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (!is_identifier(variables[i]) || is_function_name(variables[i])) {
      throw std::invalid_argument(fmt::format("parse: '{}' is not a usable variable name", variables[i]));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (variables[i] == variables[j]) {
        throw std::invalid_argument(fmt::format("parse: duplicate variable name '{}'", variables[i]));
      }
    }
  }
  Parser parser(text, variables);
  return Expr(parser.parse_all(), variables.size());
}

Expr parse(std::string_view text, std::size_t arity) {
  const auto names = default_variable_names(arity);
  return parse(text, names);
}

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const Expr& e, std::span<const std::string> variables) {
  if (variables.size() != e.arity()) throw std::invalid_argument("to_string: names do not match arity");
  std::vector<std::string> stack;
  for (const Node& node : e.program()) {
    switch (node.op) {
      case OpCode::Constant:
        if (std::signbit(node.value)) {
          stack.push_back(fmt::format("(-{:.17g})", -node.value));
        } else {
          stack.push_back(fmt::format("{:.17g}", node.value));
        }
        break;
      case OpCode::Variable:
        stack.push_back(variables[static_cast<std::size_t>(node.index)]);
        break;
      case OpCode::Negate:
        stack.back() = "(-" + stack.back() + ")";
        break;
      case OpCode::PowInt:
        stack.back() = "(" + stack.back() + ")^" + std::to_string(node.index);
        break;
      case OpCode::Sin:
        stack.back() = "sin(" + stack.back() + ")";
        break;
      case OpCode::Cos:
        stack.back() = "cos(" + stack.back() + ")";
        break;
      case OpCode::Exp:
        stack.back() = "exp(" + stack.back() + ")";
        break;
      default: {
        std::string rhs = std::move(stack.back());
        stack.pop_back();
        const char* sym = node.op == OpCode::Add        ? " + "
                          : node.op == OpCode::Subtract ? " - "
                          : node.op == OpCode::Multiply ? " * "
                                                        : " / ";
        stack.back() = "(" + stack.back() + sym + rhs + ")";
      }
    }
  }
  return stack.back();
}

std::string to_string(const Expr& e) {
  const auto names = default_variable_names(e.arity());
  return to_string(e, names);
}

// ---------------------------------------------------------------------------
// Builders

namespace {

Expr combine(const Expr& a, const Expr& b, OpCode op) {
  if (a.arity() != b.arity()) throw std::invalid_argument("Expr: arity mismatch");
  std::vector<Node> program(a.program().begin(), a.program().end());
  program.insert(program.end(), b.program().begin(), b.program().end());
  program.push_back(Node{op, 0.0, 0});
  return Expr(std::move(program), a.arity());
}

Expr unary(const Expr& a, OpCode op, int index = 0) {
  std::vector<Node> program(a.program().begin(), a.program().end());
  program.push_back(Node{op, 0.0, index});
  return Expr(std::move(program), a.arity());
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) { return combine(a, b, OpCode::Add); }
Expr operator-(const Expr& a, const Expr& b) { return combine(a, b, OpCode::Subtract); }
Expr operator*(const Expr& a, const Expr& b) { return combine(a, b, OpCode::Multiply); }
Expr operator/(const Expr& a, const Expr& b) { return combine(a, b, OpCode::Divide); }
Expr operator-(const Expr& a) { return unary(a, OpCode::Negate); }
Expr pow(const Expr& a, int exponent) {
  if (exponent < 0) throw std::invalid_argument("pow: negative exponent");
  return unary(a, OpCode::PowInt, exponent);
}
Expr sin(const Expr& a) { return unary(a, OpCode::Sin); }
Expr cos(const Expr& a) { return unary(a, OpCode::Cos); }
Expr exp(const Expr& a) { return unary(a, OpCode::Exp); }

}  // namespace tancone
