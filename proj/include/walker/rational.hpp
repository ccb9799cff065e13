#pragma once

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "walker/errors.hpp"

namespace walker {

/**
 * @brief Exact rational number with arbitrary precision numerator and denominator.
 *
 * Always kept in lowest terms with a positive denominator, so zero is uniquely 0/1
 * and structural equality is numeric equality.
 */
class Rational {
public:
  Rational() = default;
  Rational(long value) : value_(value) {}                                // NOLINT(google-explicit-constructor)
  Rational(int value) : value_(static_cast<long>(value)) {}              // NOLINT(google-explicit-constructor)
  Rational(long num, long den) {
    if (den == 0) {
      throw Error("rational with zero denominator");
    }
    value_ = mpq_class(mpz_class(num), mpz_class(den));
    value_.canonicalize();
  }
  explicit Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

  /// Parses "p" or "p/q" with optional leading sign.
  static Rational parse(std::string_view text) {
    std::string s(text);
    auto begin = s.find_first_not_of(" \t");
    auto end = s.find_last_not_of(" \t");
    if (begin == std::string::npos) {
      throw Error("empty rational literal");
    }
    s = s.substr(begin, end - begin + 1);
    auto slash = s.find('/');
    auto valid_int = [](const std::string& part, bool allow_sign) {
      std::size_t i = 0;
      if (allow_sign && i < part.size() && (part[i] == '-' || part[i] == '+')) {
        ++i;
      }
      if (i == part.size()) {
        return false;
      }
      for (; i < part.size(); ++i) {
        if (part[i] < '0' || part[i] > '9') {
          return false;
        }
      }
      return true;
    };
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num, true) || !valid_int(den, false)) {
      throw Error("malformed rational literal: '" + std::string(text) + "'");
    }
    if (num[0] == '+') {
      num.erase(0, 1);
    }
    mpz_class n(num, 10);
    mpz_class d(den, 10);
    if (d == 0) {
      throw Error("rational with zero denominator: '" + std::string(text) + "'");
    }
    return Rational(mpq_class(n, d));
  }

  /// Exact conversion of a finite binary double.
  static Rational from_double(double value) {
    if (!std::isfinite(value)) {
      throw Error("cannot convert non-finite double to rational");
    }
    return Rational(mpq_class(value));
  }

  [[nodiscard]] const mpq_class& raw() const noexcept { return value_; }
  [[nodiscard]] mpz_class numerator() const { return value_.get_num(); }
  [[nodiscard]] mpz_class denominator() const { return value_.get_den(); }
  [[nodiscard]] bool is_zero() const noexcept { return sgn(value_) == 0; }
  [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }
  [[nodiscard]] int sign() const noexcept { return sgn(value_); }
  [[nodiscard]] double to_double() const { return value_.get_d(); }

  /// Renders as "p" when integral, otherwise "p/q".
  [[nodiscard]] std::string str() const {
    if (is_integer()) {
      return value_.get_num().get_str();
    }
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) {
      throw Error("rational division by zero");
    }
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  /// Integer power, exponent may be negative for nonzero base.
  [[nodiscard]] Rational pow(long exponent) const {
    if (exponent < 0) {
      return Rational(1) / pow(-exponent);
    }
    mpq_class result(1);
    mpq_class base = value_;
    auto e = static_cast<unsigned long>(exponent);
    while (e != 0) {
      if ((e & 1UL) != 0) {
        result *= base;
      }
      base *= base;
      e >>= 1U;
    }
    return Rational(std::move(result));
  }

private:
  mpq_class value_{0};
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

} // namespace walker
