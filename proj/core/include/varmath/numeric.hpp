#pragma once

#include <string>

namespace varmath {

/// Rounds to `digits` decimal places, halves away from zero:
/// round_half_away(2.5, 0) == 3, round_half_away(-2.5, 0) == -3.
/// This is the single rounding rule used for variable values, ground
/// truths, and graded model answers, so results are bit-stable.
double round_half_away(double value, int digits);

/// True when `value` is integral and fits the exact integer range of double.
bool is_integral_value(double value);

/// How sampled values appear inside question text.
enum class RenderPolicy {
  /// Integers render bare ("4", never "4.0"); other values render with
  /// `digits` decimals and trailing zeros trimmed ("1.50" -> "1.5").
  kTrimmed,
  /// Every value renders with exactly `digits` decimals.
  kFixed,
};

/// Renders a numeric value for substitution into question text.
std::string render_number(double value, int digits,
                          RenderPolicy policy = RenderPolicy::kTrimmed);

/// Shortest decimal form that parses back to exactly `value`.
std::string render_shortest(double value);

}  // namespace varmath
