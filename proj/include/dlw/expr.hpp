#pragma once

// Coefficient expressions in the single variable y, e.g. "1 + 0.5*tanh(y)".
//
// Grammar (binary operators are left-associative):
//
//   expr    := term { ("+" | "-") term }
//   term    := unary { ("*" | "/") unary }
//   unary   := "-" unary | power
//   power   := primary { "^" integer }
//   integer := ["-"] digit { digit }
//   primary := number | "y" | func "(" expr ")" | "(" expr ")"
//   func    := "exp" | "tanh" | "sech" | "sin" | "cos"
//   number  := digits [ "." digits ] [ ("e" | "E") ["+" | "-"] digits ]
//
// so "-y^2" is -(y^2) and "2*y^2" is 2*(y^2).

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dlw {

/// Value and first derivative with respect to y.
struct Dual {
  double value = 0.0;
  double deriv = 0.0;
};

inline Dual operator+(Dual a, Dual b) { return {a.value + b.value, a.deriv + b.deriv}; }
inline Dual operator-(Dual a, Dual b) { return {a.value - b.value, a.deriv - b.deriv}; }
inline Dual operator-(Dual a) { return {-a.value, -a.deriv}; }
inline Dual operator*(Dual a, Dual b) {
  return {a.value * b.value, a.deriv * b.value + a.value * b.deriv};
}

enum class Func { Exp, Tanh, Sech, Sin, Cos };
enum class BinaryOp { Add, Sub, Mul, Div };

std::string_view to_string(Func f);

class CoeffExpr {
 public:
  enum class Kind { Literal, Variable, Negate, Binary, Power, Call };

  /// Literal 0.
  CoeffExpr();

  static CoeffExpr literal(double v);
  static CoeffExpr variable();
  static CoeffExpr negate(CoeffExpr operand);
  static CoeffExpr binary(BinaryOp op, CoeffExpr lhs, CoeffExpr rhs);
  static CoeffExpr power(CoeffExpr base, int exponent);
  static CoeffExpr call(Func f, CoeffExpr arg);

  Kind kind() const;
  double literal_value() const;
  BinaryOp op() const;
  Func func() const;
  int exponent() const;
  const CoeffExpr& lhs() const;  // also the operand of Negate, Power, Call
  const CoeffExpr& rhs() const;

  bool is_constant() const;  // no occurrence of y

  friend bool operator==(const CoeffExpr& a, const CoeffExpr& b);

 public:
  struct Node;

 private:
  explicit CoeffExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const Node& node() const;
  std::shared_ptr<const Node> node_;
};

class ExprParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownIdentifier, UnknownFunction, NonIntegerExponent };
  ExprParseError(Kind kind, std::size_t offset, const std::string& message);
  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

class ExprEvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

CoeffExpr parse_coeff_expr(std::string_view text);

/// Renders with the minimum parentheses needed to parse back to the same tree.
std::string render(const CoeffExpr& e);

/// (e(y), e'(y)) by forward-mode propagation. Throws ExprEvalError on
/// division by zero or a non-finite result.
Dual eval_dual(const CoeffExpr& e, double y);

}  // namespace dlw
