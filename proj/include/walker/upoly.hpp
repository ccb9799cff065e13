#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "walker/errors.hpp"
#include "walker/matrix.hpp"
#include "walker/rational.hpp"

namespace walker {

/**
 * @brief Univariate polynomial in lambda with rational coefficients.
 *
 * coeffs()[i] multiplies lambda^i; the leading coefficient is never zero (the zero
 * polynomial has no coefficients).
 */
class UPoly {
public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  /// lambda^n
  static UPoly power(std::size_t n) {
    std::vector<Rational> c(n + 1, Rational(0));
    c[n] = Rational(1);
    return UPoly(std::move(c));
  }

  [[nodiscard]] const std::vector<Rational>& coeffs() const noexcept { return c_; }
  [[nodiscard]] bool is_zero() const noexcept { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  [[nodiscard]] int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] const Rational& leading() const { return c_.back(); }
  [[nodiscard]] Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }

  [[nodiscard]] UPoly monic() const {
    if (is_zero()) {
      return *this;
    }
    Rational lead = leading();
    std::vector<Rational> c = c_;
    for (auto& v : c) {
      v /= lead;
    }
    return UPoly(std::move(c));
  }

  [[nodiscard]] UPoly derivative() const {
    if (c_.size() <= 1) {
      return {};
    }
    std::vector<Rational> c(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) {
      c[i - 1] = c_[i] * Rational(static_cast<long>(i));
    }
    return UPoly(std::move(c));
  }

  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      c[i] += a.c_[i];
    }
    for (std::size_t i = 0; i < b.c_.size(); ++i) {
      c[i] += b.c_[i];
    }
    return UPoly(std::move(c));
  }

  friend UPoly operator-(const UPoly& a, const UPoly& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      c[i] += a.c_[i];
    }
    for (std::size_t i = 0; i < b.c_.size(); ++i) {
      c[i] -= b.c_[i];
    }
    return UPoly(std::move(c));
  }

  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) {
      return {};
    }
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        c[i + j] += a.c_[i] * b.c_[j];
      }
    }
    return UPoly(std::move(c));
  }

  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  /// Quotient and remainder of a / b; b must be nonzero.
  friend std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) {
      throw Error("polynomial division by zero");
    }
    std::vector<Rational> rem = a.c_;
    if (a.degree() < b.degree()) {
      return {UPoly(), a};
    }
    std::vector<Rational> quot(rem.size() - b.c_.size() + 1, Rational(0));
    for (std::size_t k = quot.size(); k-- > 0;) {
      Rational f = rem[k + b.c_.size() - 1] / b.leading();
      quot[k] = f;
      if (f.is_zero()) {
        continue;
      }
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        rem[k + j] -= f * b.c_[j];
      }
    }
    return {UPoly(std::move(quot)), UPoly(std::move(rem))};
  }

  [[nodiscard]] Rational evaluate(const Rational& x) const {
    Rational acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) {
      acc = acc * x + c_[i];
    }
    return acc;
  }

  /// p(A) by Horner's rule on matrices.
  [[nodiscard]] Mat4<Rational> evaluate(const Mat4<Rational>& a) const {
    Mat4<Rational> acc = zero_mat4<Rational>();
    for (std::size_t i = c_.size(); i-- > 0;) {
      acc = acc * a;
      for (std::size_t d = 0; d < 4; ++d) {
        acc[d][d] += c_[i];
      }
    }
    return acc;
  }

  /// "lambda^4 - 6*lambda^3 + ..." for diagnostics.
  [[nodiscard]] std::string str() const {
    if (is_zero()) {
      return "0";
    }
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      const Rational& v = c_[i];
      if (v.is_zero()) {
        continue;
      }
      Rational mag = abs(v);
      if (out.empty()) {
        out += v.sign() < 0 ? "-" : "";
      } else {
        out += v.sign() < 0 ? " - " : " + ";
      }
      if (i == 0 || mag != Rational(1)) {
        out += mag.str();
        if (i != 0) {
          out += "*";
        }
      }
      if (i >= 1) {
        out += "lambda";
      }
      if (i >= 2) {
        out += "^" + std::to_string(i);
      }
    }
    return out;
  }

private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) {
      c_.pop_back();
    }
  }

  std::vector<Rational> c_;
};

/// Monic greatest common divisor (zero only when both inputs are zero).
inline UPoly gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// True when b divides a exactly.
inline bool divides(const UPoly& b, const UPoly& a) { return divmod(a, b).second.is_zero(); }

/**
 * @brief Square-free decomposition (Yun): monic p = prod_i f_i^i with f_i square-free and
 * pairwise coprime. Returns (f_i, i) for the non-constant factors.
 */
inline std::vector<std::pair<UPoly, int>> squarefree_decomposition(const UPoly& p) {
  std::vector<std::pair<UPoly, int>> out;
  UPoly f = p.monic();
  if (f.degree() <= 0) {
    return out;
  }
  UPoly a = gcd(f, f.derivative());
  UPoly b = divmod(f, a).first;
  UPoly c = divmod(f.derivative(), a).first;
  UPoly d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    a = gcd(b, d);
    if (a.degree() > 0) {
      out.emplace_back(a, i);
    }
    b = divmod(b, a).first;
    c = divmod(d, a).first;
    d = c - b.derivative();
    ++i;
  }
  return out;
}

} // namespace walker
