#pragma once

#include <cstddef>

#include <boost/math/quadrature/gauss.hpp>

#include "walker/errors.hpp"
#include "walker/fast_poly.hpp"
#include "walker/geodesic.hpp"
#include "walker/metric.hpp"

namespace walker {

/**
 * @brief Geodesic of a strict Walker metric without a step-size controller.
 *
 * x3 and x4 are affine in t. The remaining coordinates obey x1'' = f1(t), x2'' = f2(t)
 * with f polynomial in t (the reduced equations below, with psi evaluated on the affine
 * line), so each interval is integrated by a 20-point Gauss-Legendre rule:
 *   v(t+h) = v(t) + int f,   x(t+h) = x(t) + h v(t) + int (t+h-s) f(s) ds.
 * The rule is exact while psi has degree at most 38 in (x3, x4).
 */
inline Trajectory strict_geodesic_reference(const WalkerMetric& m, const GeodesicState& s0, double horizon,
                                            std::size_t intervals = 1000) {
  if (!m.is_strict()) {
    throw PreconditionViolation("strict_geodesic_reference: psi depends on x1 or x2");
  }
  if (!(horizon > s0.t) || intervals == 0) {
    throw InvalidOptions("strict_geodesic_reference: horizon must exceed the initial time");
  }
  FastPoly p33_3(m.psi33.differentiate(3)), p33_4(m.psi33.differentiate(4));
  FastPoly p34_3(m.psi34.differentiate(3)), p34_4(m.psi34.differentiate(4));
  FastPoly p44_3(m.psi44.differentiate(3)), p44_4(m.psi44.differentiate(4));
  std::uint32_t deg = 0;
  for (const FastPoly* p : {&p33_3, &p33_4, &p34_3, &p34_4, &p44_3, &p44_4}) {
    deg = std::max(deg, p->max_exponent());
  }
  const double v3 = s0.v[2], v4 = s0.v[3];
  auto forcing = [&](double t) -> std::array<double, 2> {
    double dt = t - s0.t;
    PowerCache pc({0.0, 0.0, s0.x[2] + v3 * dt, s0.x[3] + v4 * dt}, deg);
    double f1 = -(0.5 * v3 * v3 * p33_3.eval(pc) + 0.5 * v4 * v4 * (2 * p34_4.eval(pc) - p44_3.eval(pc)) +
                  v3 * v4 * p33_4.eval(pc));
    double f2 = -(0.5 * v3 * v3 * (2 * p34_3.eval(pc) - p33_4.eval(pc)) + 0.5 * v4 * v4 * p44_4.eval(pc) +
                  v3 * v4 * p44_3.eval(pc));
    return {f1, f2};
  };

  using Rule = boost::math::quadrature::gauss<double, 20>;
  Trajectory traj;
  traj.samples.reserve(intervals + 1);
  GeodesicState s = s0;
  traj.samples.push_back(s);
  traj.steps.push_back(0.0);
  const double h = (horizon - s0.t) / static_cast<double>(intervals);
  for (std::size_t n = 0; n < intervals; ++n) {
    double a = s0.t + h * static_cast<double>(n);
    double b = n + 1 == intervals ? horizon : a + h;
    std::array<double, 2> dv{}, dx{};
    for (std::size_t c = 0; c < 2; ++c) {
      dv[c] = Rule::integrate([&](double t) { return forcing(t)[c]; }, a, b);
      dx[c] = Rule::integrate([&](double t) { return (b - t) * forcing(t)[c]; }, a, b);
    }
    double len = b - a;
    s.t = b;
    s.x[0] += len * s.v[0] + dx[0];
    s.x[1] += len * s.v[1] + dx[1];
    s.v[0] += dv[0];
    s.v[1] += dv[1];
    s.x[2] = s0.x[2] + v3 * (b - s0.t);
    s.x[3] = s0.x[3] + v4 * (b - s0.t);
    traj.samples.push_back(s);
    traj.steps.push_back(len);
  }
  return traj;
}

} // namespace walker
