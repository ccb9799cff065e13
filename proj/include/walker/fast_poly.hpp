#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "walker/errors.hpp"
#include "walker/poly4.hpp"

namespace walker {

/// Powers x_i^0 .. x_i^n of one point, shared by every polynomial evaluated there.
/// Exponents past the fixed table fall back to std::pow.
class PowerCache {
public:
  static constexpr std::uint32_t table_size = 24;

  PowerCache(const Point4<double>& p, std::uint32_t max_exponent)
      : p_(p), max_(std::min(max_exponent, table_size - 1)) {
    for (std::size_t i = 0; i < 4; ++i) {
      if (!std::isfinite(p[i])) {
        throw EvaluationOverflow();
      }
      table_[i][0] = 1.0;
      for (std::uint32_t k = 1; k <= max_; ++k) {
        table_[i][k] = table_[i][k - 1] * p[i];
      }
    }
  }

  [[nodiscard]] double at(std::size_t var, std::uint32_t k) const {
    return k <= max_ ? table_[var][k] : std::pow(p_[var], static_cast<double>(k));
  }

private:
  Point4<double> p_;
  std::uint32_t max_;
  std::array<std::array<double, table_size>, 4> table_{};
};

/// Poly4 flattened to double coefficients for the trajectory (float) path.
class FastPoly {
public:
  FastPoly() = default;
  explicit FastPoly(const Poly4& p) {
    terms_.reserve(p.terms().size());
    for (const auto& [e, c] : p.terms()) {
      terms_.push_back({c.to_double(), e});
      max_exponent_ = std::max({max_exponent_, e[0], e[1], e[2], e[3]});
    }
  }

  [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
  [[nodiscard]] std::uint32_t max_exponent() const noexcept { return max_exponent_; }

  /// Sum of terms; the cache must cover max_exponent(). Non-finite results are the caller's to check.
  [[nodiscard]] double eval(const PowerCache& pc) const {
    double s = 0.0;
    for (const auto& t : terms_) {
      double v = t.coeff;
      for (std::size_t i = 0; i < 4; ++i) {
        if (t.exp[i] != 0) {
          v *= pc.at(i, t.exp[i]);
        }
      }
      s += v;
    }
    return s;
  }

private:
  struct Term {
    double coeff;
    Exponent exp;
  };
  std::vector<Term> terms_;
  std::uint32_t max_exponent_ = 0;
};

} // namespace walker
