#include "varmath/numeric.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace varmath {

double round_half_away(double value, int digits) {
  if (!std::isfinite(value)) {
    return value;
  }
  double scale = std::pow(10.0, digits);
  double scaled = value * scale;
  // std::round implements half-away-from-zero directly.
  return std::round(scaled) / scale;
}

bool is_integral_value(double value) {
  return std::isfinite(value) && value == std::trunc(value) &&
         std::fabs(value) < 9.007199254740992e15;
}

std::string render_number(double value, int digits, RenderPolicy policy) {
  if (policy == RenderPolicy::kTrimmed && is_integral_value(value)) {
    double normalized = value == 0.0 ? 0.0 : value;  // fold -0.0 into "0"
    return std::to_string(static_cast<long long>(normalized));
  }

  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  std::string out = buf;
  if (policy == RenderPolicy::kFixed) {
    return out;
  }
  if (out.find('.') != std::string::npos) {
    while (!out.empty() && out.back() == '0') {
      out.pop_back();
    }
    if (!out.empty() && out.back() == '.') {
      out.pop_back();
    }
  }
  if (out == "-0") {
    out = "0";
  }
  return out;
}

std::string render_shortest(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace varmath
