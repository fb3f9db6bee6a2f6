#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "mxsefl/error.hpp"

namespace mxsefl {

/// Exact rational number in lowest terms with a positive denominator.
///
/// Numerator and denominator are 64-bit; intermediate products are carried in
/// 128 bits and an ArithmeticOverflow error is raised if a reduced result does
/// not fit back into 64 bits. Comparisons never overflow.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) return from_wide(Wide(a.num_) + b.num_, 1);
    return from_wide(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) return from_wide(Wide(a.num_) - b.num_, 1);
    return from_wide(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.den_ == 1 && b.den_ == 1) return from_wide(Wide(a.num_) * b.num_, 1);
    return from_wide(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error(ErrorCode::ArithmeticOverflow, "division by zero");
    return from_wide(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    return Wide(a.num_) * b.den_ <=> Wide(b.num_) * a.den_;
  }

  /// "p" for integers, "p/q" otherwise.
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Accepts "p", "-p" and "p/q" with q != 0.
  static Rational parse(std::string_view text) {
    auto to_int = [&](std::string_view s) -> std::int64_t {
      if (s.empty()) throw Error(ErrorCode::ParseError, "bad rational '" + std::string(text) + "'");
      std::size_t pos = 0;
      bool negative = false;
      if (s[0] == '-' || s[0] == '+') {
        negative = s[0] == '-';
        pos = 1;
      }
      if (pos == s.size()) throw Error(ErrorCode::ParseError, "bad rational '" + std::string(text) + "'");
      Wide acc = 0;
      for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (c < '0' || c > '9') {
          throw Error(ErrorCode::ParseError, "bad rational '" + std::string(text) + "'");
        }
        acc = acc * 10 + (c - '0');
        if (acc > Wide(INT64_MAX)) {
          throw Error(ErrorCode::ParseError, "rational out of range '" + std::string(text) + "'");
        }
      }
      return static_cast<std::int64_t>(negative ? -acc : acc);
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(to_int(text));
    std::int64_t den = to_int(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
    return Rational(to_int(text.substr(0, slash)), den);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  __extension__ typedef __int128 Wide;

  static Wide wide_gcd(Wide a, Wide b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      Wide t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational from_wide(Wide num, Wide den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (den != 1) {
      Wide g = wide_gcd(num, den);
      if (g > 1) {
        num /= g;
        den /= g;
      }
    }
    if (num > Wide(INT64_MAX) || num < Wide(INT64_MIN) || den > Wide(INT64_MAX)) {
      throw Error(ErrorCode::ArithmeticOverflow, "rational result exceeds 64 bits");
    }
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  void assign(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error(ErrorCode::ArithmeticOverflow, "zero denominator");
    *this = from_wide(num, den);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace mxsefl
