#pragma once

#include <cstdint>

#include "walker/metric.hpp"
#include "walker/poly4.hpp"
#include "walker/rng.hpp"

namespace walker::testing {

inline Rational random_rational(CounterRng& rng, long num = 6, long den = 5) {
  return {rng.uniform_int(-num, num), rng.uniform_int(1, den)};
}

/// Sparse polynomial with at most `terms` monomials, each exponent <= max_exp.
inline Poly4 random_poly(CounterRng& rng, int terms = 5, std::uint32_t max_exp = 3) {
  Poly4 p;
  for (int t = 0; t < terms; ++t) {
    Exponent e{};
    for (auto& x : e) {
      x = static_cast<std::uint32_t>(rng.uniform_int(0, max_exp));
    }
    p += Poly4::monomial(e, random_rational(rng, 4, 3));
  }
  return p;
}

/// Polynomial in the variables selected by mask (bit i set = x_{i+1} may appear).
inline Poly4 random_poly_in(CounterRng& rng, unsigned mask, int terms = 4, std::uint32_t max_exp = 2) {
  Poly4 p;
  for (int t = 0; t < terms; ++t) {
    Exponent e{};
    for (std::size_t i = 0; i < 4; ++i) {
      e[i] = (mask >> i & 1U) != 0 ? static_cast<std::uint32_t>(rng.uniform_int(0, max_exp)) : 0;
    }
    p += Poly4::monomial(e, random_rational(rng, 3, 2));
  }
  return p;
}

inline Point4<Rational> random_point(CounterRng& rng) {
  return {random_rational(rng), random_rational(rng), random_rational(rng), random_rational(rng)};
}

inline WalkerMetric random_walker(CounterRng& rng) {
  WalkerMetric m;
  m.psi33 = random_poly(rng, 3, 2);
  m.psi34 = random_poly(rng, 3, 2);
  m.psi44 = random_poly(rng, 3, 2);
  m.label = "random";
  return m;
}

inline WalkerMetric psi34_metric(const Poly4& psi34) {
  WalkerMetric m;
  m.psi34 = psi34;
  m.label = "psi34-only";
  return m;
}

} // namespace walker::testing
