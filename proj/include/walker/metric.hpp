#pragma once

#include <string>
#include <utility>

#include "walker/matrix.hpp"
#include "walker/parse.hpp"
#include "walker/poly4.hpp"

namespace walker {

/**
 * @brief Walker metric of signature (2,2) on R^4.
 *
 * g(d1,d3) = g(d2,d4) = 1, g(di,dj) = psi_ij for i,j in {3,4}, all other entries 0.
 * The block structure makes det g = 1 everywhere, so the inverse is polynomial.
 */
struct WalkerMetric {
  Poly4 psi33;
  Poly4 psi34;
  Poly4 psi44;
  std::string label;
  ParameterMap parameters;

  static constexpr int dimension = 4;

  /// True when every psi_ij depends on x3, x4 only.
  [[nodiscard]] bool is_strict() const {
    for (const Poly4* p : {&psi33, &psi34, &psi44}) {
      if (p->depends_on(1) || p->depends_on(2)) {
        return false;
      }
    }
    return true;
  }

  [[nodiscard]] bool is_flat_walker() const { return psi33.is_zero() && psi34.is_zero() && psi44.is_zero(); }

  /// The metric as a symmetric matrix of polynomials.
  [[nodiscard]] SymMatrix4<Poly4> matrix() const {
    SymMatrix4<Poly4> g;
    g(0, 2) = Poly4(1);
    g(1, 3) = Poly4(1);
    g(2, 2) = psi33;
    g(2, 3) = psi34;
    g(3, 3) = psi44;
    return g;
  }

  /// Closed-form inverse: g^11 = -psi33, g^12 = -psi34, g^22 = -psi44, g^13 = g^24 = 1.
  [[nodiscard]] SymMatrix4<Poly4> inverse_matrix() const {
    SymMatrix4<Poly4> h;
    h(0, 0) = -psi33;
    h(0, 1) = -psi34;
    h(1, 1) = -psi44;
    h(0, 2) = Poly4(1);
    h(1, 3) = Poly4(1);
    return h;
  }
};

/// Builds a metric from expression strings with parameter bindings.
inline WalkerMetric make_metric(std::string label, std::string_view psi33, std::string_view psi34,
                                std::string_view psi44, const ParameterMap& params = {}) {
  WalkerMetric m;
  m.psi33 = parse(psi33, params);
  m.psi34 = parse(psi34, params);
  m.psi44 = parse(psi44, params);
  m.label = std::move(label);
  m.parameters = params;
  return m;
}

template <typename T>
SymMatrix4<T> evaluate(const SymMatrix4<Poly4>& m, const Point4<T>& p) {
  SymMatrix4<T> r;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i; j < 4; ++j) {
      r(i, j) = evaluate(m(i, j), p);
    }
  }
  return r;
}

template <typename T>
SymMatrix4<T> metric_matrix(const WalkerMetric& metric, const Point4<T>& p) {
  SymMatrix4<T> g;
  g(0, 2) = T(1);
  g(1, 3) = T(1);
  g(2, 2) = evaluate(metric.psi33, p);
  g(2, 3) = evaluate(metric.psi34, p);
  g(3, 3) = evaluate(metric.psi44, p);
  return g;
}

template <typename T>
SymMatrix4<T> inverse_metric(const WalkerMetric& metric, const Point4<T>& p) {
  SymMatrix4<T> h;
  h(0, 0) = -evaluate(metric.psi33, p);
  h(0, 1) = -evaluate(metric.psi34, p);
  h(1, 1) = -evaluate(metric.psi44, p);
  h(0, 2) = T(1);
  h(1, 3) = T(1);
  return h;
}

} // namespace walker
