#include "dlw/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <system_error>
#include <utility>

namespace dlw {

struct CoeffExpr::Node {
  Kind kind = Kind::Literal;
  double value = 0.0;
  BinaryOp op = BinaryOp::Add;
  Func func = Func::Exp;
  int exponent = 0;
  CoeffExpr lhs;
  CoeffExpr rhs;
};

namespace {

std::shared_ptr<const CoeffExpr::Node> zero_literal() {
  static const auto zero = std::make_shared<const CoeffExpr::Node>();
  return zero;
}

}  // namespace

CoeffExpr::CoeffExpr() : node_(nullptr) {}

CoeffExpr CoeffExpr::literal(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Literal;
  n->value = v;
  return CoeffExpr(std::move(n));
}

CoeffExpr CoeffExpr::variable() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  return CoeffExpr(std::move(n));
}

CoeffExpr CoeffExpr::negate(CoeffExpr operand) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Negate;
  n->lhs = std::move(operand);
  return CoeffExpr(std::move(n));
}

CoeffExpr CoeffExpr::binary(BinaryOp op, CoeffExpr lhs, CoeffExpr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return CoeffExpr(std::move(n));
}

CoeffExpr CoeffExpr::power(CoeffExpr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Power;
  n->exponent = exponent;
  n->lhs = std::move(base);
  return CoeffExpr(std::move(n));
}

CoeffExpr CoeffExpr::call(Func f, CoeffExpr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->func = f;
  n->lhs = std::move(arg);
  return CoeffExpr(std::move(n));
}

// A null node stands for the literal 0.
const CoeffExpr::Node& CoeffExpr::node() const { return node_ ? *node_ : *zero_literal(); }

CoeffExpr::Kind CoeffExpr::kind() const { return node().kind; }
double CoeffExpr::literal_value() const { return node().value; }
BinaryOp CoeffExpr::op() const { return node().op; }
Func CoeffExpr::func() const { return node().func; }
int CoeffExpr::exponent() const { return node().exponent; }
const CoeffExpr& CoeffExpr::lhs() const { return node().lhs; }
const CoeffExpr& CoeffExpr::rhs() const { return node().rhs; }

bool CoeffExpr::is_constant() const {
  switch (kind()) {
    case Kind::Literal: return true;
    case Kind::Variable: return false;
    case Kind::Binary: return lhs().is_constant() && rhs().is_constant();
    default: return lhs().is_constant();
  }
}

bool operator==(const CoeffExpr& a, const CoeffExpr& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case CoeffExpr::Kind::Literal: return a.literal_value() == b.literal_value();
    case CoeffExpr::Kind::Variable: return true;
    case CoeffExpr::Kind::Negate: return a.lhs() == b.lhs();
    case CoeffExpr::Kind::Binary: return a.op() == b.op() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case CoeffExpr::Kind::Power: return a.exponent() == b.exponent() && a.lhs() == b.lhs();
    case CoeffExpr::Kind::Call: return a.func() == b.func() && a.lhs() == b.lhs();
  }
  return false;
}

std::string_view to_string(Func f) {
  switch (f) {
    case Func::Exp: return "exp";
    case Func::Tanh: return "tanh";
    case Func::Sech: return "sech";
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
  }
  return "?";
}

ExprParseError::ExprParseError(Kind kind, std::size_t offset, const std::string& message)
    : std::runtime_error(message + " at offset " + std::to_string(offset)),
      kind_(kind),
      offset_(offset) {}

namespace {

std::optional<Func> lookup_func(std::string_view name) {
  for (Func f : {Func::Exp, Func::Tanh, Func::Sech, Func::Sin, Func::Cos}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  CoeffExpr parse() {
    CoeffExpr e = expr();
    skip_space();
    if (pos_ != text_.size()) syntax("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  using Kind = ExprParseError::Kind;

  [[noreturn]] void fail(Kind kind, std::size_t at, const std::string& msg) {
    throw ExprParseError(kind, at, msg);
  }
  [[noreturn]] void syntax(const std::string& msg) { fail(Kind::Syntax, pos_, msg); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool at_digit() const {
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  CoeffExpr expr() {
    CoeffExpr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = CoeffExpr::binary(BinaryOp::Add, std::move(lhs), term());
      } else if (accept('-')) {
        lhs = CoeffExpr::binary(BinaryOp::Sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  CoeffExpr term() {
    CoeffExpr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = CoeffExpr::binary(BinaryOp::Mul, std::move(lhs), unary());
      } else if (accept('/')) {
        lhs = CoeffExpr::binary(BinaryOp::Div, std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  CoeffExpr unary() {
    if (accept('-')) return CoeffExpr::negate(unary());
    return power();
  }

  CoeffExpr power() {
    CoeffExpr base = primary();
    while (accept('^')) base = CoeffExpr::power(std::move(base), integer_exponent());
    return base;
  }

  int integer_exponent() {
    skip_space();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    if (!at_digit()) fail(Kind::NonIntegerExponent, start, "exponent must be an integer literal");
    const std::size_t digits = pos_;
    while (at_digit()) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
      fail(Kind::NonIntegerExponent, start, "exponent must be an integer literal");
    }
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + digits, text_.data() + pos_, value);
    if (ec != std::errc{}) fail(Kind::Syntax, start, "exponent out of range");
    return negative ? -value : value;
  }

  CoeffExpr number() {
    const std::size_t start = pos_;
    while (at_digit()) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      if (!at_digit()) syntax("expected digits after '.'");
      while (at_digit()) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (!at_digit()) syntax("expected digits in exponent of number");
      while (at_digit()) ++pos_;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc{} || ptr != text_.data() + pos_) fail(Kind::Syntax, start, "malformed number");
    return CoeffExpr::literal(v);
  }

  CoeffExpr primary() {
    skip_space();
    if (pos_ >= text_.size()) syntax("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      if (c == '.') syntax("number must start with a digit");
      return number();
    }
    if (c == '(') {
      ++pos_;
      CoeffExpr inner = expr();
      if (!accept(')')) syntax("expected ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view name = text_.substr(start, pos_ - start);
      skip_space();
      const bool call = pos_ < text_.size() && text_[pos_] == '(';
      if (call) {
        const auto f = lookup_func(name);
        if (!f) fail(Kind::UnknownFunction, start, "unknown function '" + std::string(name) + "'");
        ++pos_;
        CoeffExpr arg = expr();
        if (!accept(')')) syntax("expected ')' after function argument");
        return CoeffExpr::call(*f, std::move(arg));
      }
      if (name == "y") return CoeffExpr::variable();
      if (lookup_func(name)) fail(Kind::Syntax, pos_, "expected '(' after function name");
      fail(Kind::UnknownIdentifier, start, "unknown identifier '" + std::string(name) + "'");
    }
    syntax("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Binding strength used by the renderer.
int precedence(const CoeffExpr& e) {
  switch (e.kind()) {
    case CoeffExpr::Kind::Binary:
      return (e.op() == BinaryOp::Add || e.op() == BinaryOp::Sub) ? 1 : 2;
    case CoeffExpr::Kind::Negate: return 3;
    case CoeffExpr::Kind::Power: return 4;
    default: return 5;
  }
}

void render_into(const CoeffExpr& e, std::string& out);

void render_child(const CoeffExpr& e, int min_prec, std::string& out) {
  if (precedence(e) < min_prec) {
    out += '(';
    render_into(e, out);
    out += ')';
  } else {
    render_into(e, out);
  }
}

void render_into(const CoeffExpr& e, std::string& out) {
  switch (e.kind()) {
    case CoeffExpr::Kind::Literal: {
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof buf, e.literal_value());
      const std::string_view s(buf, static_cast<std::size_t>(res.ptr - buf));
      // Negative literals only arise from the builder API; keep them atomic.
      if (!s.empty() && s.front() == '-') {
        out += "(-";
        out += s.substr(1);
        out += ')';
      } else {
        out += s;
      }
      return;
    }
    case CoeffExpr::Kind::Variable: out += 'y'; return;
    case CoeffExpr::Kind::Negate:
      out += '-';
      render_child(e.lhs(), 3, out);
      return;
    case CoeffExpr::Kind::Binary: {
      const int p = precedence(e);
      static const char* ops[] = {" + ", " - ", "*", "/"};
      render_child(e.lhs(), p, out);
      out += ops[static_cast<int>(e.op())];
      render_child(e.rhs(), p + 1, out);
      return;
    }
    case CoeffExpr::Kind::Power:
      render_child(e.lhs(), 5, out);
      out += '^';
      out += std::to_string(e.exponent());
      return;
    case CoeffExpr::Kind::Call:
      out += to_string(e.func());
      out += '(';
      render_into(e.lhs(), out);
      out += ')';
      return;
  }
}

Dual checked(Dual d, double y) {
  if (!std::isfinite(d.value) || !std::isfinite(d.deriv)) {
    throw ExprEvalError("non-finite result evaluating expression at y = " + std::to_string(y));
  }
  return d;
}

}  // namespace

CoeffExpr parse_coeff_expr(std::string_view text) { return Parser(text).parse(); }

std::string render(const CoeffExpr& e) {
  std::string out;
  render_into(e, out);
  return out;
}

Dual eval_dual(const CoeffExpr& e, double y) {
  switch (e.kind()) {
    case CoeffExpr::Kind::Literal: return {e.literal_value(), 0.0};
    case CoeffExpr::Kind::Variable: return {y, 1.0};
    case CoeffExpr::Kind::Negate: return -eval_dual(e.lhs(), y);
    case CoeffExpr::Kind::Binary: {
      const Dual a = eval_dual(e.lhs(), y);
      const Dual b = eval_dual(e.rhs(), y);
      switch (e.op()) {
        case BinaryOp::Add: return checked(a + b, y);
        case BinaryOp::Sub: return checked(a - b, y);
        case BinaryOp::Mul: return checked(a * b, y);
        case BinaryOp::Div:
          if (b.value == 0.0) {
            throw ExprEvalError("division by zero evaluating '" + render(e) + "' at y = " + std::to_string(y));
          }
          return checked({a.value / b.value, (a.deriv * b.value - a.value * b.deriv) / (b.value * b.value)}, y);
      }
      break;
    }
    case CoeffExpr::Kind::Power: {
      const Dual a = eval_dual(e.lhs(), y);
      const int n = e.exponent();
      if (n == 0) return {1.0, 0.0};
      if (n < 0 && a.value == 0.0) {
        throw ExprEvalError("division by zero evaluating '" + render(e) + "' at y = " + std::to_string(y));
      }
      return checked({std::pow(a.value, n), n * std::pow(a.value, n - 1) * a.deriv}, y);
    }
    case CoeffExpr::Kind::Call: {
      const Dual a = eval_dual(e.lhs(), y);
      switch (e.func()) {
        case Func::Exp: {
          const double v = std::exp(a.value);
          return checked({v, v * a.deriv}, y);
        }
        case Func::Tanh: {
          const double v = std::tanh(a.value);
          return checked({v, (1.0 - v * v) * a.deriv}, y);
        }
        case Func::Sech: {
          const double v = 1.0 / std::cosh(a.value);
          return checked({v, -v * std::tanh(a.value) * a.deriv}, y);
        }
        case Func::Sin: return checked({std::sin(a.value), std::cos(a.value) * a.deriv}, y);
        case Func::Cos: return checked({std::cos(a.value), -std::sin(a.value) * a.deriv}, y);
      }
      break;
    }
  }
  throw ExprEvalError("malformed expression node");
}

}  // namespace dlw
