#include "varmath/grader.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "varmath/numeric.hpp"

namespace varmath {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct Token {
  std::size_t begin = 0;
  std::size_t end = 0;
  double value = 0;
};

/// Parses an unsigned numeral at `pos`: plain digits/decimal, or digit
/// groups joined by thousands separators ("1,234,567"), optionally followed
/// by a decimal part. Returns the end offset and writes the numeric value,
/// or returns pos when no numeral starts here.
std::size_t scan_unsigned_numeral(std::string_view text, std::size_t pos,
                                  double& value) {
  std::size_t i = pos;
  std::string digits;

  if (i < text.size() && is_digit(text[i])) {
    std::size_t first_run = i;
    while (i < text.size() && is_digit(text[i])) {
      ++i;
    }
    digits.assign(text.substr(first_run, i - first_run));

    // Thousands groups: the lead run must be 1-3 digits and every group
    // exactly 3, with no digit following the last group.
    if (digits.size() <= 3 && i < text.size() && text[i] == ',') {
      std::size_t j = i;
      std::string grouped = digits;
      while (j + 3 < text.size() && text[j] == ',' && is_digit(text[j + 1]) &&
             is_digit(text[j + 2]) && is_digit(text[j + 3])) {
        grouped.append(text.substr(j + 1, 3));
        j += 4;
      }
      bool consumed_groups = j > i;
      bool group_boundary_ok =
          consumed_groups && (j >= text.size() || !is_digit(text[j]));
      if (consumed_groups && group_boundary_ok) {
        digits = grouped;
        i = j;
      }
    }
  } else if (i < text.size() && text[i] == '.' && i + 1 < text.size() &&
             is_digit(text[i + 1])) {
    // leading-dot decimal handled below
  } else {
    return pos;
  }

  if (i < text.size() && text[i] == '.' && i + 1 < text.size() &&
      is_digit(text[i + 1])) {
    digits += '.';
    ++i;
    while (i < text.size() && is_digit(text[i])) {
      digits += text[i];
      ++i;
    }
  }
  if (digits.empty() || digits == ".") {
    return pos;
  }

  value = std::strtod(digits.c_str(), nullptr);
  return i;
}

/// Parses a \frac{p}{q}-style token at `pos` (the backslash). Returns the
/// end offset, or pos if this is not a fraction command.
std::size_t scan_latex_fraction(std::string_view text, std::size_t pos,
                                double& value) {
  static const std::string_view kCommands[] = {"\\frac", "\\dfrac",
                                               "\\tfrac"};
  std::size_t after_cmd = 0;
  for (auto cmd : kCommands) {
    if (text.compare(pos, cmd.size(), cmd) == 0) {
      after_cmd = pos + cmd.size();
      break;
    }
  }
  if (after_cmd == 0) {
    return pos;
  }

  auto read_brace_number = [&](std::size_t at,
                               double& out) -> std::size_t {
    while (at < text.size() &&
           std::isspace(static_cast<unsigned char>(text[at]))) {
      ++at;
    }
    if (at >= text.size() || text[at] != '{') {
      return 0;
    }
    std::size_t close = text.find('}', at + 1);
    if (close == std::string_view::npos) {
      return 0;
    }
    std::string inner(text.substr(at + 1, close - at - 1));
    // trim
    while (!inner.empty() &&
           std::isspace(static_cast<unsigned char>(inner.front()))) {
      inner.erase(inner.begin());
    }
    while (!inner.empty() &&
           std::isspace(static_cast<unsigned char>(inner.back()))) {
      inner.pop_back();
    }
    if (inner.empty()) {
      return 0;
    }
    bool negative = false;
    std::size_t k = 0;
    if (inner[0] == '-' || inner[0] == '+') {
      negative = inner[0] == '-';
      k = 1;
    }
    double magnitude = 0;
    std::size_t end = scan_unsigned_numeral(inner, k, magnitude);
    if (end != inner.size() || end == k) {
      return 0;
    }
    out = negative ? -magnitude : magnitude;
    return close + 1;
  };

  double numerator = 0;
  std::size_t after_num = read_brace_number(after_cmd, numerator);
  if (after_num == 0) {
    return pos;
  }
  double denominator = 0;
  std::size_t after_den = read_brace_number(after_num, denominator);
  if (after_den == 0 || denominator == 0.0) {
    return pos;
  }
  value = numerator / denominator;
  return std::isfinite(value) ? after_den : pos;
}

/// All standalone numeric tokens in order. A token may carry a leading sign
/// when the sign itself sits at a word boundary ("= -5" yes, "3-5" no).
std::vector<Token> scan_tokens(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];

    if (c == '\\') {
      double value = 0;
      std::size_t end = scan_latex_fraction(text, i, value);
      if (end != i) {
        std::size_t begin = i;
        if (begin > 0 && (text[begin - 1] == '-' || text[begin - 1] == '+') &&
            (begin == 1 || !is_word_char(text[begin - 2]))) {
          if (text[begin - 1] == '-') {
            value = -value;
          }
          --begin;
        }
        tokens.push_back({begin, end, value});
        i = end;
        continue;
      }
      ++i;
      continue;
    }

    bool numeral_start =
        is_digit(c) ||
        (c == '.' && i + 1 < text.size() && is_digit(text[i + 1]));
    if (!numeral_start) {
      ++i;
      continue;
    }
    // Word boundary: not glued to an identifier or to more number text.
    if (i > 0 && (is_word_char(text[i - 1]) || text[i - 1] == '.')) {
      // skip the rest of this run so "x12" or "1.2.3" tails are not tokens
      while (i < text.size() && (is_digit(text[i]) || text[i] == '.')) {
        ++i;
      }
      continue;
    }

    double value = 0;
    std::size_t end = scan_unsigned_numeral(text, i, value);
    if (end == i) {
      ++i;
      continue;
    }

    // Simple fraction p/q.
    std::size_t slash = end;
    while (slash < text.size() && text[slash] == ' ') {
      ++slash;
    }
    if (slash < text.size() && text[slash] == '/') {
      std::size_t den_at = slash + 1;
      while (den_at < text.size() && text[den_at] == ' ') {
        ++den_at;
      }
      double denominator = 0;
      std::size_t den_end = scan_unsigned_numeral(text, den_at, denominator);
      if (den_end != den_at && denominator != 0.0 &&
          std::isfinite(value / denominator)) {
        value /= denominator;
        end = den_end;
      }
    }

    std::size_t begin = i;
    if (begin > 0 && (text[begin - 1] == '-' || text[begin - 1] == '+') &&
        (begin == 1 || !is_word_char(text[begin - 2]))) {
      if (text[begin - 1] == '-') {
        value = -value;
      }
      --begin;
    }

    // Reject tokens glued to a following identifier ("42nd").
    if (end < text.size() &&
        (std::isalpha(static_cast<unsigned char>(text[end])) ||
         text[end] == '_')) {
      i = end;
      continue;
    }

    if (std::isfinite(value)) {
      tokens.push_back({begin, end, value});
    }
    i = end;
  }
  return tokens;
}

/// Complete \boxed{...} spans; returns the content of the last one, if any.
std::optional<std::string> last_boxed_content(std::string_view text) {
  std::optional<std::string> content;
  std::size_t i = 0;
  static constexpr std::string_view kBoxed = "\\boxed";
  while ((i = text.find(kBoxed, i)) != std::string_view::npos) {
    std::size_t j = i + kBoxed.size();
    while (j < text.size() &&
           std::isspace(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    if (j >= text.size() || text[j] != '{') {
      i += kBoxed.size();
      continue;
    }
    std::size_t depth = 1;
    std::size_t k = j + 1;
    while (k < text.size() && depth > 0) {
      if (text[k] == '{') {
        ++depth;
      } else if (text[k] == '}') {
        --depth;
      }
      ++k;
    }
    if (depth != 0) {
      break;  // unterminated; ignore this and any later partial box
    }
    content = std::string(text.substr(j + 1, k - j - 2));
    i = k;
  }
  return content;
}

std::optional<double> parse_answer_span(std::string_view span) {
  // Trim whitespace and outer dollar signs, then trailing punctuation
  // (including a LaTeX "\%").
  std::size_t b = 0;
  std::size_t e = span.size();
  while (b < e && (std::isspace(static_cast<unsigned char>(span[b])) ||
                   span[b] == '$')) {
    ++b;
  }
  while (e > b) {
    char c = span[e - 1];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '$' || c == '.' ||
        c == ',' || c == ';' || c == '!') {
      --e;
    } else if (c == '%') {
      e -= (e - 1 > b && span[e - 2] == '\\') ? 2 : 1;
    } else {
      break;
    }
  }
  std::string_view trimmed = span.substr(b, e - b);
  if (trimmed.empty()) {
    return std::nullopt;
  }

  auto tokens = scan_tokens(trimmed);
  if (tokens.size() != 1) {
    return std::nullopt;
  }
  // The single token must cover the whole span to count as a numeric
  // answer; "4\pi" and "x=3" are not numerals.
  if (tokens[0].begin != 0 || tokens[0].end != trimmed.size()) {
    return std::nullopt;
  }
  return tokens[0].value;
}

std::size_t find_last_cue(std::string_view text) {
  std::string lowered(text);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  static constexpr std::string_view kCues[] = {"answer is", "answer:"};
  std::size_t best = std::string_view::npos;
  for (auto cue : kCues) {
    std::size_t at = lowered.rfind(cue);
    if (at != std::string::npos) {
      std::size_t end = at + cue.size();
      if (best == std::string_view::npos || end > best) {
        best = end;
      }
    }
  }
  return best;
}

}  // namespace

ExtractedAnswer extract_answer(std::string_view completion) {
  if (auto boxed = last_boxed_content(completion)) {
    return ExtractedAnswer{*boxed, parse_answer_span(*boxed)};
  }

  auto tokens = scan_tokens(completion);

  std::size_t cue_end = find_last_cue(completion);
  if (cue_end != std::string_view::npos) {
    for (const auto& token : tokens) {
      if (token.begin >= cue_end) {
        return ExtractedAnswer{
            std::string(completion.substr(token.begin,
                                          token.end - token.begin)),
            token.value};
      }
    }
  }

  if (!tokens.empty()) {
    const auto& token = tokens.back();
    return ExtractedAnswer{
        std::string(completion.substr(token.begin, token.end - token.begin)),
        token.value};
  }
  return ExtractedAnswer{};
}

bool judge(const ExtractedAnswer& extracted, double truth, int answer_round) {
  if (!extracted.value.has_value() || !std::isfinite(*extracted.value)) {
    return false;
  }
  double rounded = round_half_away(*extracted.value, answer_round);
  double tolerance = 0.5 * std::pow(10.0, -answer_round) * (1.0 + 1e-9);
  return std::fabs(rounded - truth) <= tolerance;
}

bool grade_completion(std::string_view completion, double truth,
                      int answer_round) {
  return judge(extract_answer(completion), truth, answer_round);
}

}  // namespace varmath
