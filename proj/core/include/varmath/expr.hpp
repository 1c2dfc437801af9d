#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "varmath/errors.hpp"

namespace varmath {

enum class BinaryOp { kAdd, kSub, kMul, kDiv, kPow };
enum class UnaryOp { kNegate };

/// Built-in functions. sqrt/abs/floor/ceil take one argument,
/// min/max take two.
enum class Builtin { kSqrt, kAbs, kFloor, kCeil, kMin, kMax };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree.
///
/// Leaves are numeric literals, the named constants pi and e, and variable
/// references. Variable references keep their full surface identifier
/// ("VAR_A"), which is also the key used in variable maps and assignments.
class Expr {
 public:
  struct Number {
    double value;
  };
  struct NamedConstant {
    enum Kind { kPi, kE } kind;
  };
  struct Variable {
    std::string name;
  };
  struct Unary {
    UnaryOp op;
    ExprPtr operand;
  };
  struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };
  struct Call {
    Builtin fn;
    std::vector<ExprPtr> args;
  };

  using Node =
      std::variant<Number, NamedConstant, Variable, Unary, Binary, Call>;

  explicit Expr(Node node) : node_(std::move(node)) {}

  const Node& node() const { return node_; }

  static ExprPtr number(double value);
  static ExprPtr pi();
  static ExprPtr e();
  static ExprPtr variable(std::string name);
  static ExprPtr unary(UnaryOp op, ExprPtr operand);
  static ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr call(Builtin fn, std::vector<ExprPtr> args);

 private:
  Node node_;
};

/// Structural equality.
bool operator==(const Expr& a, const Expr& b);
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

/// Parses infix notation with precedence ^ over unary minus over * / over
/// + -. All binary operators associate left except ^, which associates
/// right. Parentheses, the functions sqrt/abs/floor/ceil/min/max, the
/// constants pi and e, and VAR_ identifiers are recognized.
/// Throws ParseError with the character offset of the offending token.
ExprPtr parse_expression(std::string_view text);

/// Canonical compact rendering; re-parsing the result reproduces an
/// identical tree.
std::string to_string(const Expr& expr);

}  // namespace varmath
