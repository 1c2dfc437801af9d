#pragma once

#include <map>
#include <set>
#include <string>

#include "varmath/expr.hpp"

namespace varmath {

/// Variable bindings for evaluation. Values must be finite.
using Environment = std::map<std::string, double>;

/// Evaluates in double precision. Throws EvalError naming the offending
/// subexpression on: unbound variables, division by zero, sqrt of a
/// negative, a negative base raised to a non-integer exponent, or any
/// non-finite intermediate result. Pure: equal inputs give equal outputs.
double evaluate(const Expr& expr, const Environment& env);

/// The set of variable names referenced anywhere in the tree.
std::set<std::string> free_variables(const Expr& expr);

}  // namespace varmath
