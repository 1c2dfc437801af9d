#include "varmath/eval.hpp"

#include <cmath>
#include <numbers>

namespace varmath {

namespace {

[[noreturn]] void domain_error(const std::string& what, const Expr& where) {
  throw EvalError(what + " in '" + to_string(where) + "'");
}

double check_finite(double value, const Expr& where) {
  if (!std::isfinite(value)) {
    domain_error("non-finite result", where);
  }
  return value;
}

double eval_node(const Expr& expr, const Environment& env) {
  struct Visitor {
    const Expr& expr;
    const Environment& env;

    double operator()(const Expr::Number& n) const { return n.value; }

    double operator()(const Expr::NamedConstant& c) const {
      return c.kind == Expr::NamedConstant::kPi ? std::numbers::pi
                                                : std::numbers::e;
    }

    double operator()(const Expr::Variable& v) const {
      auto it = env.find(v.name);
      if (it == env.end()) {
        throw EvalError("unbound variable '" + v.name + "'");
      }
      return it->second;
    }

    double operator()(const Expr::Unary& u) const {
      return -eval_node(*u.operand, env);
    }

    double operator()(const Expr::Binary& b) const {
      double lhs = eval_node(*b.lhs, env);
      double rhs = eval_node(*b.rhs, env);
      switch (b.op) {
        case BinaryOp::kAdd:
          return check_finite(lhs + rhs, expr);
        case BinaryOp::kSub:
          return check_finite(lhs - rhs, expr);
        case BinaryOp::kMul:
          return check_finite(lhs * rhs, expr);
        case BinaryOp::kDiv:
          if (rhs == 0.0) {
            domain_error("division by zero", expr);
          }
          return check_finite(lhs / rhs, expr);
        case BinaryOp::kPow:
          if (lhs < 0.0 && rhs != std::trunc(rhs)) {
            domain_error("negative base with non-integer exponent", expr);
          }
          return check_finite(std::pow(lhs, rhs), expr);
      }
      domain_error("unknown operator", expr);
    }

    double operator()(const Expr::Call& c) const {
      double a0 = eval_node(*c.args[0], env);
      switch (c.fn) {
        case Builtin::kSqrt:
          if (a0 < 0.0) {
            domain_error("sqrt of a negative value", expr);
          }
          return check_finite(std::sqrt(a0), expr);
        case Builtin::kAbs:
          return std::fabs(a0);
        case Builtin::kFloor:
          return std::floor(a0);
        case Builtin::kCeil:
          return std::ceil(a0);
        case Builtin::kMin:
          return std::fmin(a0, eval_node(*c.args[1], env));
        case Builtin::kMax:
          return std::fmax(a0, eval_node(*c.args[1], env));
      }
      domain_error("unknown function", expr);
    }
  };
  return std::visit(Visitor{expr, env}, expr.node());
}

void collect_variables(const Expr& expr, std::set<std::string>& out) {
  struct Visitor {
    std::set<std::string>& out;
    void operator()(const Expr::Number&) const {}
    void operator()(const Expr::NamedConstant&) const {}
    void operator()(const Expr::Variable& v) const { out.insert(v.name); }
    void operator()(const Expr::Unary& u) const {
      collect_variables(*u.operand, out);
    }
    void operator()(const Expr::Binary& b) const {
      collect_variables(*b.lhs, out);
      collect_variables(*b.rhs, out);
    }
    void operator()(const Expr::Call& c) const {
      for (const auto& arg : c.args) {
        collect_variables(*arg, out);
      }
    }
  };
  std::visit(Visitor{out}, expr.node());
}

}  // namespace

double evaluate(const Expr& expr, const Environment& env) {
  return eval_node(expr, env);
}

std::set<std::string> free_variables(const Expr& expr) {
  std::set<std::string> out;
  collect_variables(expr, out);
  return out;
}

}  // namespace varmath
