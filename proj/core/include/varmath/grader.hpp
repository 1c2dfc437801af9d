#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace varmath {

/// The answer slot recovered from a completion. `raw` is the matched span
/// verbatim (boxed content or numeric token); `value` is present only when
/// the span parsed to a finite number.
struct ExtractedAnswer {
  std::string raw;
  std::optional<double> value;
};

/// Recovers the conventional final-answer slot. Total: never throws, on any
/// byte sequence. Precedence:
///   1. the last complete \boxed{...} (balanced braces);
///   2. else the first numeric token after the last case-insensitive
///      "answer is" / "answer:" cue;
///   3. else the last standalone numeric token in the text.
/// Numeric tokens cover integers, decimals, simple fractions p/q, and
/// \frac{p}{q} (also \dfrac, \tfrac), with optional sign and with
/// thousands separators ("1,234,567") stripped.
ExtractedAnswer extract_answer(std::string_view completion);

/// Numeric verdict under the benchmark rounding rule: correct iff a value
/// was parsed and |round_half_away(value, answer_round) - truth| is at most
/// 0.5 * 10^-answer_round * (1 + 1e-9). Both sides of the comparison are
/// multiples of 10^-answer_round, so the tolerance accepts exactly the
/// matching rounded value while absorbing float representation error.
/// Ties round away from zero.
bool judge(const ExtractedAnswer& extracted, double truth, int answer_round);

/// Convenience: extract then judge.
bool grade_completion(std::string_view completion, double truth,
                      int answer_round);

}  // namespace varmath
