#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace haantjes {

/// Component expressions.
///
/// Grammar (whitespace ignored):
///
///     expr   := term (("+" | "-") term)*
///     term   := unary (("*" | "/") unary)*
///     unary  := "-" unary | power
///     power  := atom ("^" ["-"] integer)*      right associative
///     atom   := number | ident | func "(" expr ")" | "(" expr ")"
///     ident  := [utA][0-9]+                    1-based coordinate index
///     func   := exp | log | sin | cos | sqrt
///
/// so `-u1^2` is `-(u1^2)` and `u1^2^3` is `u1^8`. The three identifier
/// prefixes are interchangeable names for the same coordinates; the original
/// spelling is kept for printing.
enum class ExprOp { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Exp, Log, Sin, Cos, Sqrt };

struct ExprNode {
  ExprOp op = ExprOp::Number;
  double number = 0.0;      // Number
  int index = 0;            // Variable: 0-based coordinate; Pow: exponent
  std::string name;         // Variable: identifier as written
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

  static Expr constant(double value);
  static Expr variable(int index, char prefix = 'u');

  const ExprNode& root() const { return *root_; }
  bool empty() const { return root_ == nullptr; }

  /// Largest 0-based variable index used, or -1 for constant expressions.
  int max_variable() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  std::shared_ptr<const ExprNode> root_;
};

/// Parses `src`; identifiers must index coordinates 1..dim.
/// Throws ParseError, UnknownVariable or ArityError.
Expr parse_expr(std::string_view src, int dim = 8);

/// Fully parenthesised text that parses back to an equal tree.
std::string to_string(const Expr& e);

/// Evaluates at x. Throws EvalError for log of a nonpositive value, division
/// by zero and square roots outside their differentiable domain. Instantiated
/// for double and Dual nestings up to D4.
template <class T>
T evaluate(const Expr& e, std::span<const T> x);

}  // namespace haantjes
