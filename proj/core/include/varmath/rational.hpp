#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace varmath {

/// Exact rational arithmetic for scores. Keeping scores as rationals until
/// the final rendering step makes one-decimal report output bit-stable;
/// accumulating doubles does not.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(long long value) : num_(value), den_(1) {}  // NOLINT(google-explicit-constructor)

  Rational(long long num, long long den) : num_(num), den_(den) {
    if (den_ == 0) {
      throw std::domain_error("rational with zero denominator");
    }
    normalize();
  }

  long long num() const { return num_; }
  long long den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator-() const { return make(-static_cast<__int128>(num_), den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) {
      throw std::domain_error("rational division by zero");
    }
    return make(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  Rational abs() const { return num_ < 0 ? -*this : *this; }

  /// Renders with exactly `places` decimal digits, rounding halves away
  /// from zero ("93.25" -> "93.3" at one place). Pure integer arithmetic.
  std::string to_decimal(int places) const {
    __int128 scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    __int128 scaled = static_cast<__int128>(num_) * scale;
    __int128 q = scaled / den_;
    __int128 r = scaled % den_;
    if (r < 0) r = -r;
    if (2 * r >= den_) q += (num_ < 0 ? -1 : 1);

    bool negative = q < 0;
    if (negative) q = -q;
    std::string digits;
    if (q == 0) {
      digits = "0";
    } else {
      while (q > 0) {
        digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(q % 10)));
        q /= 10;
      }
    }
    if (places > 0) {
      while (digits.size() <= static_cast<std::size_t>(places)) {
        digits.insert(digits.begin(), '0');
      }
      digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
    }
    return negative ? "-" + digits : digits;
  }

 private:
  static Rational make(__int128 num, __int128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 g = gcd128(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    constexpr __int128 kMax = INT64_MAX;
    constexpr __int128 kMin = INT64_MIN;
    if (num > kMax || num < kMin || den > kMax) {
      throw std::overflow_error("rational overflow");
    }
    Rational r;
    r.num_ = static_cast<long long>(num);
    r.den_ = static_cast<long long>(den);
    return r;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  void normalize() {
    *this = make(num_, den_);
  }

  long long num_ = 0;
  long long den_ = 1;
};

}  // namespace varmath
