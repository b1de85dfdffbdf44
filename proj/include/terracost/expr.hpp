// Copyright 2026 The Terracost Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Closed-form expressions in two variables x and y.
//
// Grammar (lowest to highest precedence):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | 'x' | 'y' | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | tan | exp | log | sqrt | abs
//
// Values and exact first partials are propagated with forward-mode dual
// numbers. `abs` returns the subgradient 0 at the kink.

#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "terracost/error.hpp"

namespace terracost {

/// Value with its partial derivatives with respect to x and y.
struct DualValue {
  double v = 0.0;
  double dx = 0.0;
  double dy = 0.0;

  friend bool operator==(const DualValue&, const DualValue&) = default;
};

namespace detail {

inline double value_of(double a) { return a; }
inline double value_of(const DualValue& a) { return a.v; }
inline bool has_gradient(double) { return false; }
inline bool has_gradient(const DualValue& a) { return a.dx != 0.0 || a.dy != 0.0; }

inline DualValue operator+(const DualValue& a, const DualValue& b) {
  return {a.v + b.v, a.dx + b.dx, a.dy + b.dy};
}
inline DualValue operator-(const DualValue& a, const DualValue& b) {
  return {a.v - b.v, a.dx - b.dx, a.dy - b.dy};
}
inline DualValue operator-(const DualValue& a) { return {-a.v, -a.dx, -a.dy}; }
inline DualValue operator*(const DualValue& a, const DualValue& b) {
  return {a.v * b.v, a.dx * b.v + a.v * b.dx, a.dy * b.v + a.v * b.dy};
}
inline DualValue operator/(const DualValue& a, const DualValue& b) {
  const double q = a.v / b.v;
  return {q, (a.dx - q * b.dx) / b.v, (a.dy - q * b.dy) / b.v};
}

// Chain rule for a unary function with value f and derivative df at a.v.
inline DualValue chain(const DualValue& a, double f, double df) {
  return {f, df * a.dx, df * a.dy};
}

}  // namespace detail

/// Immutable parsed expression. Nodes are stored so that children always
/// precede their parent; the root is the last node.
class Expression {
 public:
  static Expression parse(std::string_view text);

  double eval(double x, double y) const { return evaluate<double>(x, y); }

  DualValue eval_dual(double x, double y) const {
    return evaluate<DualValue>(DualValue{x, 1.0, 0.0}, DualValue{y, 0.0, 1.0});
  }

  /// Fully parenthesized, round-trip exact serialization.
  std::string render() const { return render_node(root()); }

  /// Tree shape, e.g. "Mul(Sin(Mul(5, x)), Sin(y))".
  std::string structure() const { return structure_node(root()); }

  /// True when no node refers to x or y.
  bool is_constant() const {
    for (const auto& n : nodes_) {
      if (n.op == Op::VarX || n.op == Op::VarY) return false;
    }
    return true;
  }

  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  enum class Op : std::uint8_t {
    Literal, VarX, VarY,
    Add, Sub, Mul, Div, Pow, Neg,
    Sin, Cos, Tan, Exp, Log, Sqrt, Abs,
  };

  struct Node {
    Op op;
    int lhs = -1;
    int rhs = -1;
    double literal = 0.0;
  };

  class Parser;

  int root() const { return static_cast<int>(nodes_.size()) - 1; }

  template <class T>
  T evaluate(const T& x, const T& y) const;

  template <class T>
  T apply(int index, std::span<const T> vals, const T& x, const T& y) const;

  [[noreturn]] void domain_error(int index, const char* what) const {
    throw DomainError(what, render_node(index));
  }

  static const char* function_name(Op op) {
    switch (op) {
      case Op::Sin: return "sin";
      case Op::Cos: return "cos";
      case Op::Tan: return "tan";
      case Op::Exp: return "exp";
      case Op::Log: return "log";
      case Op::Sqrt: return "sqrt";
      case Op::Abs: return "abs";
      default: return nullptr;
    }
  }

  static std::string format_literal(double v, int digits) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
  }

  std::string render_node(int i) const;
  std::string structure_node(int i) const;

  std::vector<Node> nodes_;
};

class Expression::Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expression run() {
    if (text_.find_first_not_of(" \t\r\n") == std::string_view::npos) {
      throw ParseError("empty expression", 0);
    }
    parse_expr();
    skip_ws();
    if (pos_ != text_.size()) {
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return std::move(out_);
  }

 private:
  int emit(Node n) {
    out_.nodes_.push_back(n);
    return static_cast<int>(out_.nodes_.size()) - 1;
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' ||
            text_[pos_] == '\n')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size()) {
      throw ParseError(std::string("expected '") + c + "' but reached end of input", pos_);
    }
    if (text_[pos_] != c) {
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = emit({Op::Add, lhs, parse_term()});
      } else if (accept('-')) {
        lhs = emit({Op::Sub, lhs, parse_term()});
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = emit({Op::Mul, lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = emit({Op::Div, lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    if (accept('-')) return emit({Op::Neg, parse_unary()});
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  int parse_power() {
    const int base = parse_primary();
    if (accept('^')) return emit({Op::Pow, base, parse_unary()});
    return base;
  }

  int parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      const int inner = parse_expr();
      expect(')');
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if (is_ident_start(c)) return parse_identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  int parse_number() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || !std::isfinite(value)) {
      throw ParseError("malformed number", pos_);
    }
    pos_ += static_cast<std::size_t>(ptr - first);
    Node n{Op::Literal};
    n.literal = value;
    return emit(n);
  }

  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
  }

  int parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return emit({Op::VarX});
    if (name == "y") return emit({Op::VarY});

    Op op;
    if (name == "sin") op = Op::Sin;
    else if (name == "cos") op = Op::Cos;
    else if (name == "tan") op = Op::Tan;
    else if (name == "exp") op = Op::Exp;
    else if (name == "log") op = Op::Log;
    else if (name == "sqrt") op = Op::Sqrt;
    else if (name == "abs") op = Op::Abs;
    else throw ParseError("unknown identifier '" + std::string(name) + "'", start);

    expect('(');
    int arg = parse_expr();
    int arity = 1;
    while (accept(',')) {
      parse_expr();
      ++arity;
    }
    expect(')');
    if (arity != 1) {
      throw ParseError("function '" + std::string(name) + "' expects 1 argument, got " +
                           std::to_string(arity),
                       start);
    }
    return emit({op, arg});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Expression out_;
};

inline Expression Expression::parse(std::string_view text) { return Parser(text).run(); }

template <class T>
T Expression::apply(int i, std::span<const T> vals, const T& x, const T& y) const {
  using detail::chain;
  using detail::has_gradient;
  using detail::value_of;
  using namespace detail;  // DualValue arithmetic

  const Node& n = nodes_[static_cast<std::size_t>(i)];
  const auto arg = [&](int k) -> const T& { return vals[static_cast<std::size_t>(k)]; };

  const auto unary = [&](double f, double df) -> T {
    if constexpr (std::is_same_v<T, double>) {
      (void)df;
      return f;
    } else {
      return chain(arg(n.lhs), f, df);
    }
  };

  switch (n.op) {
    case Op::Literal: return T{n.literal};
    case Op::VarX: return x;
    case Op::VarY: return y;
    case Op::Add: return arg(n.lhs) + arg(n.rhs);
    case Op::Sub: return arg(n.lhs) - arg(n.rhs);
    case Op::Mul: return arg(n.lhs) * arg(n.rhs);
    case Op::Div:
      if (value_of(arg(n.rhs)) == 0.0) domain_error(i, "division by zero");
      return arg(n.lhs) / arg(n.rhs);
    case Op::Neg: return -arg(n.lhs);
    case Op::Pow: {
      const T& base = arg(n.lhs);
      const T& expo = arg(n.rhs);
      const double b = value_of(base);
      const double e = value_of(expo);
      if (b < 0.0 && std::floor(e) != e) domain_error(i, "negative base with non-integer exponent");
      if (b == 0.0 && e < 0.0) domain_error(i, "zero raised to a negative power");
      const double p = std::pow(b, e);
      if constexpr (std::is_same_v<T, double>) {
        return p;
      } else {
        DualValue r{p, 0.0, 0.0};
        if (has_gradient(base)) {
          if (b == 0.0 && e < 1.0) domain_error(i, "power is not differentiable at zero base");
          const double db = e == 0.0 ? 0.0 : e * std::pow(b, e - 1.0);
          r.dx += db * base.dx;
          r.dy += db * base.dy;
        }
        if (has_gradient(expo)) {
          if (b <= 0.0) domain_error(i, "variable exponent requires a positive base");
          const double de = p * std::log(b);
          r.dx += de * expo.dx;
          r.dy += de * expo.dy;
        }
        return r;
      }
    }
    case Op::Sin: {
      const double a = value_of(arg(n.lhs));
      return unary(std::sin(a), std::cos(a));
    }
    case Op::Cos: {
      const double a = value_of(arg(n.lhs));
      return unary(std::cos(a), -std::sin(a));
    }
    case Op::Tan: {
      const double a = value_of(arg(n.lhs));
      const double c = std::cos(a);
      if (c == 0.0) domain_error(i, "tan pole");
      return unary(std::tan(a), 1.0 / (c * c));
    }
    case Op::Exp: {
      const double e = std::exp(value_of(arg(n.lhs)));
      return unary(e, e);
    }
    case Op::Log: {
      const double a = value_of(arg(n.lhs));
      if (a <= 0.0) domain_error(i, "log of non-positive value");
      return unary(std::log(a), 1.0 / a);
    }
    case Op::Sqrt: {
      const double a = value_of(arg(n.lhs));
      if (a < 0.0) domain_error(i, "sqrt of negative value");
      const double s = std::sqrt(a);
      if (s == 0.0) {
        if (has_gradient(arg(n.lhs))) domain_error(i, "sqrt is not differentiable at zero");
        return unary(0.0, 0.0);
      }
      return unary(s, 0.5 / s);
    }
    case Op::Abs: {
      const double a = value_of(arg(n.lhs));
      const double slope = a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
      return unary(std::abs(a), slope);
    }
  }
  return T{};
}

template <class T>
T Expression::evaluate(const T& x, const T& y) const {
  constexpr std::size_t kInline = 64;
  std::array<T, kInline> small{};
  std::vector<T> large;
  std::span<T> vals;
  if (nodes_.size() <= kInline) {
    vals = std::span<T>(small.data(), nodes_.size());
  } else {
    large.resize(nodes_.size());
    vals = large;
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    vals[i] = apply<T>(static_cast<int>(i), std::span<const T>(vals.data(), i), x, y);
    if (!std::isfinite(detail::value_of(vals[i]))) {
      domain_error(static_cast<int>(i), "non-finite result");
    }
  }
  return vals.back();
}

inline std::string Expression::render_node(int i) const {
  const Node& n = nodes_[static_cast<std::size_t>(i)];
  switch (n.op) {
    case Op::Literal: return format_literal(n.literal, 17);
    case Op::VarX: return "x";
    case Op::VarY: return "y";
    case Op::Add: return "(" + render_node(n.lhs) + " + " + render_node(n.rhs) + ")";
    case Op::Sub: return "(" + render_node(n.lhs) + " - " + render_node(n.rhs) + ")";
    case Op::Mul: return "(" + render_node(n.lhs) + " * " + render_node(n.rhs) + ")";
    case Op::Div: return "(" + render_node(n.lhs) + " / " + render_node(n.rhs) + ")";
    case Op::Pow: return "(" + render_node(n.lhs) + " ^ " + render_node(n.rhs) + ")";
    case Op::Neg: return "(-" + render_node(n.lhs) + ")";
    default: return std::string(function_name(n.op)) + "(" + render_node(n.lhs) + ")";
  }
}

inline std::string Expression::structure_node(int i) const {
  const Node& n = nodes_[static_cast<std::size_t>(i)];
  const auto binary = [&](const char* name) {
    return std::string(name) + "(" + structure_node(n.lhs) + ", " + structure_node(n.rhs) + ")";
  };
  switch (n.op) {
    case Op::Literal: return format_literal(n.literal, 6);
    case Op::VarX: return "x";
    case Op::VarY: return "y";
    case Op::Add: return binary("Add");
    case Op::Sub: return binary("Sub");
    case Op::Mul: return binary("Mul");
    case Op::Div: return binary("Div");
    case Op::Pow: return binary("Pow");
    case Op::Neg: return "Neg(" + structure_node(n.lhs) + ")";
    default: {
      std::string name = function_name(n.op);
      name[0] = static_cast<char>(name[0] - 'a' + 'A');
      return name + "(" + structure_node(n.lhs) + ")";
    }
  }
}

}  // namespace terracost
