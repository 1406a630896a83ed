#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include "qforms/arith.hpp"

namespace qforms {

/// Exact rational with 128-bit numerator and denominator. Always reduced,
/// denominator positive. Overflow throws std::overflow_error.
class Rational {
 public:
  Rational() = default;
  Rational(int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(i128 n, i128 d) : num_(n), den_(d) { normalize(); }

  static Rational parse(const std::string& text);

  [[nodiscard]] i128 num() const { return num_; }
  [[nodiscard]] i128 den() const { return den_; }
  [[nodiscard]] bool is_integer() const { return den_ == 1; }
  [[nodiscard]] int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }
  [[nodiscard]] long double to_long_double() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }
  [[nodiscard]] double to_double() const { return static_cast<double>(to_long_double()); }
  [[nodiscard]] std::string str() const;

  /// Floor as 128-bit integer.
  [[nodiscard]] i128 floor() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  void normalize();

  i128 num_ = 0;
  i128 den_ = 1;
};

std::string to_string(i128 v);

/// p^e as a rational, e may be negative.
Rational rational_pow(int64_t p, int e);

}  // namespace qforms
