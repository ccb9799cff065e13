#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "walker/errors.hpp"
#include "walker/rational.hpp"

namespace walker {

/// Coordinate tuple (x1, x2, x3, x4); the scalar is Rational on the exact path, double otherwise.
template <typename T>
using Point4 = std::array<T, 4>;

/// Tangent vector in the coordinate frame d/dx1 .. d/dx4.
template <typename T>
using Vec4 = std::array<T, 4>;

/// Exponent tuple (e1, e2, e3, e4) of a monomial x1^e1 x2^e2 x3^e3 x4^e4.
using Exponent = std::array<std::uint32_t, 4>;

/**
 * @brief Sparse multivariate polynomial in x1..x4 with rational coefficients.
 *
 * Terms are stored in a sorted map without zero coefficients, so two equal polynomials
 * always have identical term maps and `operator==` is polynomial equality.
 */
class Poly4 {
public:
  using TermMap = std::map<Exponent, Rational>;

  Poly4() = default;
  Poly4(const Rational& c) { // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) {
      terms_.emplace(Exponent{0, 0, 0, 0}, c);
    }
  }
  Poly4(int c) : Poly4(Rational(c)) {} // NOLINT(google-explicit-constructor)

  /// The coordinate function x_var, var in 1..4.
  static Poly4 variable(int var) {
    check_var(var);
    Exponent e{0, 0, 0, 0};
    e[static_cast<std::size_t>(var - 1)] = 1;
    return monomial(e, Rational(1));
  }

  static Poly4 monomial(const Exponent& e, const Rational& c) {
    Poly4 p;
    if (!c.is_zero()) {
      p.terms_.emplace(e, c);
    }
    return p;
  }

  [[nodiscard]] const TermMap& terms() const noexcept { return terms_; }
  [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
  [[nodiscard]] bool is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponent{0, 0, 0, 0});
  }
  /// Constant term (zero when absent).
  [[nodiscard]] Rational constant_term() const {
    auto it = terms_.find(Exponent{0, 0, 0, 0});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  [[nodiscard]] std::uint32_t total_degree() const {
    std::uint32_t d = 0;
    for (const auto& [e, c] : terms_) {
      d = std::max(d, e[0] + e[1] + e[2] + e[3]);
    }
    return d;
  }

  [[nodiscard]] std::uint32_t degree_in(int var) const {
    check_var(var);
    std::uint32_t d = 0;
    for (const auto& [e, c] : terms_) {
      d = std::max(d, e[static_cast<std::size_t>(var - 1)]);
    }
    return d;
  }

  [[nodiscard]] bool depends_on(int var) const { return degree_in(var) > 0; }

  Poly4& operator+=(const Poly4& o) {
    for (const auto& [e, c] : o.terms_) {
      add_term(e, c);
    }
    return *this;
  }
  Poly4& operator-=(const Poly4& o) {
    for (const auto& [e, c] : o.terms_) {
      add_term(e, -c);
    }
    return *this;
  }
  Poly4& operator*=(const Poly4& o) {
    *this = *this * o;
    return *this;
  }

  friend Poly4 operator+(Poly4 a, const Poly4& b) { return a += b; }
  friend Poly4 operator-(Poly4 a, const Poly4& b) { return a -= b; }
  friend Poly4 operator-(const Poly4& a) {
    Poly4 r;
    for (const auto& [e, c] : a.terms_) {
      r.terms_.emplace_hint(r.terms_.end(), e, -c);
    }
    return r;
  }
  friend Poly4 operator*(const Poly4& a, const Poly4& b) {
    Poly4 r;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        r.add_term(Exponent{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]}, ca * cb);
      }
    }
    return r;
  }
  friend Poly4 operator*(const Rational& s, const Poly4& p) {
    if (s.is_zero()) {
      return {};
    }
    Poly4 r;
    for (const auto& [e, c] : p.terms_) {
      r.terms_.emplace_hint(r.terms_.end(), e, s * c);
    }
    return r;
  }

  friend bool operator==(const Poly4& a, const Poly4& b) { return a.terms_ == b.terms_; }

  [[nodiscard]] Poly4 pow(std::uint32_t n) const {
    Poly4 result(1);
    Poly4 base = *this;
    while (n != 0) {
      if ((n & 1U) != 0) {
        result *= base;
      }
      n >>= 1U;
      if (n != 0) {
        base *= base;
      }
    }
    return result;
  }

  /// Formal partial derivative with respect to x_var, var in 1..4.
  [[nodiscard]] Poly4 differentiate(int var) const {
    check_var(var);
    auto idx = static_cast<std::size_t>(var - 1);
    Poly4 r;
    for (const auto& [e, c] : terms_) {
      if (e[idx] == 0) {
        continue;
      }
      Exponent d = e;
      d[idx] -= 1;
      r.add_term(d, c * Rational(static_cast<long>(e[idx])));
    }
    return r;
  }

  /// Exact value at a rational point.
  [[nodiscard]] Rational eval_exact(const Point4<Rational>& p) const {
    PowerTable<Rational> powers(p, max_exponents());
    Rational sum(0);
    for (const auto& [e, c] : terms_) {
      Rational term = c;
      for (std::size_t i = 0; i < 4; ++i) {
        if (e[i] != 0) {
          term *= powers.at(i, e[i]);
        }
      }
      sum += term;
    }
    return sum;
  }

  /// Floating-point value; throws EvaluationOverflow when the result is not finite.
  [[nodiscard]] double eval_float(const Point4<double>& p) const {
    for (double v : p) {
      if (!std::isfinite(v)) {
        throw EvaluationOverflow();
      }
    }
    PowerTable<double> powers(p, max_exponents());
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
      double term = c.to_double();
      for (std::size_t i = 0; i < 4; ++i) {
        if (e[i] != 0) {
          term *= powers.at(i, e[i]);
        }
      }
      sum += term;
    }
    if (!std::isfinite(sum)) {
      throw EvaluationOverflow();
    }
    return sum;
  }

  /// Renders in the expression grammar; `Poly4 q = parse(p.render())` reproduces p.
  [[nodiscard]] std::string render() const {
    if (terms_.empty()) {
      return "0";
    }
    std::vector<std::pair<Exponent, Rational>> ordered(terms_.begin(), terms_.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
      auto da = a.first[0] + a.first[1] + a.first[2] + a.first[3];
      auto db = b.first[0] + b.first[1] + b.first[2] + b.first[3];
      if (da != db) {
        return da > db;
      }
      return a.first > b.first;
    });
    std::string out;
    bool first = true;
    for (const auto& [e, c] : ordered) {
      Rational mag = abs(c);
      if (first) {
        if (c.sign() < 0) {
          out += "-";
        }
      } else {
        out += c.sign() < 0 ? " - " : " + ";
      }
      first = false;
      std::string body;
      bool unit = mag == Rational(1);
      if (!unit || e == Exponent{0, 0, 0, 0}) {
        body = mag.str();
      }
      for (std::size_t i = 0; i < 4; ++i) {
        if (e[i] == 0) {
          continue;
        }
        if (!body.empty()) {
          body += "*";
        }
        body += "x" + std::to_string(i + 1);
        if (e[i] > 1) {
          body += "^" + std::to_string(e[i]);
        }
      }
      out += body;
    }
    return out;
  }

private:
  template <typename T>
  class PowerTable {
  public:
    PowerTable(const Point4<T>& p, const Exponent& max_exp) {
      for (std::size_t i = 0; i < 4; ++i) {
        table_[i].reserve(max_exp[i] + 1);
        table_[i].push_back(T(1));
        for (std::uint32_t k = 1; k <= max_exp[i]; ++k) {
          table_[i].push_back(table_[i].back() * p[i]);
        }
      }
    }
    [[nodiscard]] const T& at(std::size_t var, std::uint32_t k) const { return table_[var][k]; }

  private:
    std::array<std::vector<T>, 4> table_;
  };

  static void check_var(int var) {
    if (var < 1 || var > 4) {
      throw Error("coordinate index out of range 1..4: " + std::to_string(var));
    }
  }

  [[nodiscard]] Exponent max_exponents() const {
    Exponent m{0, 0, 0, 0};
    for (const auto& [e, c] : terms_) {
      for (std::size_t i = 0; i < 4; ++i) {
        m[i] = std::max(m[i], e[i]);
      }
    }
    return m;
  }

  void add_term(const Exponent& e, const Rational& c) {
    if (c.is_zero()) {
      return;
    }
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) {
        terms_.erase(it);
      }
    }
  }

  TermMap terms_;
};

inline Poly4 differentiate(const Poly4& p, int var) { return p.differentiate(var); }
inline Rational eval_exact(const Poly4& p, const Point4<Rational>& at) { return p.eval_exact(at); }
inline double eval_float(const Poly4& p, const Point4<double>& at) { return p.eval_float(at); }

/// Evaluates on either path; the overload is picked by the point's scalar type.
inline Rational evaluate(const Poly4& p, const Point4<Rational>& at) { return p.eval_exact(at); }
inline double evaluate(const Poly4& p, const Point4<double>& at) { return p.eval_float(at); }

/// Converts a rational point to the nearest binary floats.
inline Point4<double> to_double(const Point4<Rational>& p) {
  return {p[0].to_double(), p[1].to_double(), p[2].to_double(), p[3].to_double()};
}

} // namespace walker
