#pragma once

#include "walker/curvature.hpp"
#include "walker/errors.hpp"
#include "walker/metric.hpp"

// Hand-derived closed forms for Walker metrics. These are independent witnesses for the
// general pipeline in curvature.hpp and are not used by it.

namespace walker {

/**
 * @brief Levi-Civita connection of a Walker metric written out term by term.
 *
 * Only nabla_{d_i} d_j for (i,j) in {13, 14, 23, 24, 33, 34, 44} are nonzero; the
 * coefficients below are transcribed directly, not derived from a general formula.
 */
inline Christoffel<Poly4> closed_form_connection(const WalkerMetric& m) {
  auto d = [](const Poly4& p, int var) { return p.differentiate(var); };
  const Poly4& p33 = m.psi33;
  const Poly4& p34 = m.psi34;
  const Poly4& p44 = m.psi44;
  const Rational h(1, 2);
  Christoffel<Poly4> c = zero_christoffel<Poly4>();
  auto set = [&c](int k, int i, int j, const Poly4& v) {
    c[k - 1][i - 1][j - 1] = v;
    c[k - 1][j - 1][i - 1] = v;
  };
  set(1, 1, 3, h * d(p33, 1));
  set(2, 1, 3, h * d(p34, 1));
  set(1, 1, 4, h * d(p34, 1));
  set(2, 1, 4, h * d(p44, 1));
  set(1, 2, 3, h * d(p33, 2));
  set(2, 2, 3, h * d(p34, 2));
  set(1, 2, 4, h * d(p34, 2));
  set(2, 2, 4, h * d(p44, 2));

  set(2, 3, 3, h * (Rational(2) * d(p34, 3) - d(p33, 4) + p44 * d(p33, 2) + p34 * d(p33, 1)));
  set(1, 3, 3, h * (d(p33, 3) + p34 * d(p33, 2) + p33 * d(p33, 1)));
  set(3, 3, 3, -h * d(p33, 1));
  set(4, 3, 3, -h * d(p33, 2));

  set(1, 3, 4, h * (d(p33, 4) + p34 * d(p34, 2) + p33 * d(p34, 1)));
  set(2, 3, 4, h * (d(p44, 3) + p44 * d(p34, 2) + p34 * d(p34, 1)));
  set(3, 3, 4, -h * d(p34, 1));
  set(4, 3, 4, -h * d(p34, 2));

  set(1, 4, 4, h * (Rational(2) * d(p34, 4) - d(p44, 3) + p34 * d(p44, 2) + p33 * d(p44, 1)));
  set(2, 4, 4, h * (d(p44, 4) + p44 * d(p44, 2) + p34 * d(p44, 1)));
  set(3, 4, 4, -h * d(p44, 1));
  set(4, 4, 4, -h * d(p44, 2));
  return c;
}

namespace detail {
inline void require_psi34_only(const WalkerMetric& m) {
  if (!m.psi33.is_zero() || !m.psi44.is_zero()) {
    throw PreconditionViolation("closed form requires psi33 = psi44 = 0");
  }
}
} // namespace detail

/**
 * @brief Ricci tensor of a metric with psi33 = psi44 = 0, from the known closed form.
 *
 * rho13 = rho24 = psi/12 / 2, rho14 = psi/11 / 2, rho23 = psi/22 / 2,
 * rho33 = (-psi/2^2 + 2 psi/23) / 2, rho44 = (-psi/1^2 + 2 psi/14) / 2,
 * rho34 = (psi/1 psi/2 + 2 psi psi/12 - psi/13 - psi/24) / 2, everything else 0.
 * Throws PreconditionViolation when psi33 or psi44 is nonzero.
 */
inline SymMatrix4<Poly4> closed_form_ricci(const WalkerMetric& m) {
  detail::require_psi34_only(m);
  const Poly4& p = m.psi34;
  auto d = [&p](int a) { return p.differentiate(a); };
  auto dd = [&p](int a, int b) { return p.differentiate(a).differentiate(b); };
  const Rational h(1, 2);
  SymMatrix4<Poly4> r;
  r(0, 2) = h * dd(1, 2);
  r(1, 3) = h * dd(1, 2);
  r(0, 3) = h * dd(1, 1);
  r(1, 2) = h * dd(2, 2);
  r(2, 2) = h * (Rational(2) * dd(2, 3) - d(2) * d(2));
  r(3, 3) = h * (Rational(2) * dd(1, 4) - d(1) * d(1));
  r(2, 3) = h * (d(1) * d(2) + Rational(2) * p * dd(1, 2) - dd(1, 3) - dd(2, 4));
  return r;
}

template <typename T>
SymMatrix4<T> closed_form_ricci(const WalkerMetric& m, const Point4<T>& at) {
  return evaluate(closed_form_ricci(m), at);
}

/// Geodesic acceleration for psi33 = psi44 = 0 from the reduced closed-form equations.
template <typename T>
Vec4<T> closed_form_geodesic_acceleration(const WalkerMetric& m, const Point4<T>& x, const Vec4<T>& v) {
  detail::require_psi34_only(m);
  const Poly4& p = m.psi34;
  T psi = evaluate(p, x);
  T p1 = evaluate(p.differentiate(1), x);
  T p2 = evaluate(p.differentiate(2), x);
  T p3 = evaluate(p.differentiate(3), x);
  T p4 = evaluate(p.differentiate(4), x);
  Vec4<T> a;
  a[0] = -(v[0] * v[3] * p1 + v[1] * v[3] * p2 + v[2] * v[3] * psi * p2 + v[3] * v[3] * p4);
  a[1] = -(v[0] * v[2] * p1 + v[1] * v[2] * p2 + v[2] * v[2] * p3 + v[2] * v[3] * psi * p1);
  a[2] = v[2] * v[3] * p1;
  a[3] = v[2] * v[3] * p2;
  return a;
}

} // namespace walker
