#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "walker/errors.hpp"

namespace walker::ode {

template <std::size_t N>
using State = std::array<double, N>;

/// Dormand-Prince 5(4) tableau; the 5th-order solution is propagated (local extrapolation).
struct Dopri5Tableau {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  // e = b5 - b4
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
};

template <std::size_t N>
struct TrialStep {
  State<N> y;
  State<N> f_end; // derivative at the new point (first stage of the next step)
  double error = 0; // scaled RMS error; <= 1 means acceptable
  bool finite = true;
};

namespace detail {

template <std::size_t N>
bool all_finite(const State<N>& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
  State<N> out = y;
  for (std::size_t i = 0; i < N; ++i) {
    double s = 0;
    for (const auto& [c, k] : terms) {
      s += c * (*k)[i];
    }
    out[i] += h * s;
  }
  return out;
}

} // namespace detail

/**
 * @brief One Dormand-Prince trial step from (t, y) with first stage f0 = f(t, y).
 *
 * `f(t, y, dy)` fills dy. Stage evaluations that throw EvaluationOverflow or produce
 * non-finite values mark the trial as not finite instead of propagating.
 */
template <std::size_t N, typename F>
TrialStep<N> dopri5_trial(F& f, double t, const State<N>& y, const State<N>& f0, double h, double rtol,
                          double atol) {
  using T = Dopri5Tableau;
  TrialStep<N> out;
  State<N> k2{}, k3{}, k4{}, k5{}, k6{}, k7{};
  try {
    f(t + T::c2 * h, detail::axpy<N>(y, h, {{T::a21, &f0}}), k2);
    f(t + T::c3 * h, detail::axpy<N>(y, h, {{T::a31, &f0}, {T::a32, &k2}}), k3);
    f(t + T::c4 * h, detail::axpy<N>(y, h, {{T::a41, &f0}, {T::a42, &k2}, {T::a43, &k3}}), k4);
    f(t + T::c5 * h, detail::axpy<N>(y, h, {{T::a51, &f0}, {T::a52, &k2}, {T::a53, &k3}, {T::a54, &k4}}), k5);
    f(t + h, detail::axpy<N>(y, h, {{T::a61, &f0}, {T::a62, &k2}, {T::a63, &k3}, {T::a64, &k4}, {T::a65, &k5}}),
      k6);
    out.y = detail::axpy<N>(y, h, {{T::a71, &f0}, {T::a73, &k3}, {T::a74, &k4}, {T::a75, &k5}, {T::a76, &k6}});
    f(t + h, out.y, k7);
  } catch (const EvaluationOverflow&) {
    out.finite = false;
    return out;
  }
  if (!detail::all_finite<N>(out.y) || !detail::all_finite<N>(k7)) {
    out.finite = false;
    return out;
  }
  double acc = 0;
  for (std::size_t i = 0; i < N; ++i) {
    double e = h * (T::e1 * f0[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i] + T::e6 * k6[i] + T::e7 * k7[i]);
    double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(out.y[i]));
    acc += (e / sc) * (e / sc);
  }
  out.error = std::sqrt(acc / static_cast<double>(N));
  out.f_end = k7;
  if (!std::isfinite(out.error)) {
    out.finite = false;
  }
  return out;
}

/// Proportional-integral step-size controller (Gustafsson), constants as in DOPRI5.
class PiController {
public:
  /// Factor for the next step after an accepted trial with scaled error `err`.
  double accept(double err) {
    err = std::max(err, 1e-10);
    double fac = safety_ * std::pow(err, -alpha_) * std::pow(prev_err_, beta_);
    fac = std::clamp(fac, fac_min_, rejected_last_ ? 1.0 : fac_max_);
    prev_err_ = err;
    rejected_last_ = false;
    return fac;
  }

  /// Factor for retrying a rejected trial.
  double reject(double err) {
    rejected_last_ = true;
    return std::clamp(safety_ * std::pow(err, -0.2), fac_min_, 1.0);
  }

  /// Factor after a trial that left the finite domain.
  double reject_nonfinite() {
    rejected_last_ = true;
    return fac_min_;
  }

private:
  static constexpr double beta_ = 0.04;
  static constexpr double alpha_ = 0.2 - 0.75 * beta_;
  static constexpr double safety_ = 0.9;
  static constexpr double fac_min_ = 0.2;
  static constexpr double fac_max_ = 10.0;
  double prev_err_ = 1e-4;
  bool rejected_last_ = false;
};

/// Starting step from the local scale of y and f (Hairer, Norsett, Wanner II.4).
template <std::size_t N, typename F>
double initial_step(F& f, double t, const State<N>& y, const State<N>& f0, double rtol, double atol) {
  auto norm = [&](const State<N>& v) {
    double acc = 0;
    for (std::size_t i = 0; i < N; ++i) {
      double sc = atol + rtol * std::abs(y[i]);
      acc += (v[i] / sc) * (v[i] / sc);
    }
    return std::sqrt(acc / static_cast<double>(N));
  };
  double d0 = norm(y);
  double d1 = norm(f0);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  State<N> y1{};
  for (std::size_t i = 0; i < N; ++i) {
    y1[i] = y[i] + h0 * f0[i];
  }
  State<N> f1{};
  try {
    f(t + h0, y1, f1);
  } catch (const EvaluationOverflow&) {
    return h0 * 1e-3;
  }
  State<N> df{};
  for (std::size_t i = 0; i < N; ++i) {
    df[i] = f1[i] - f0[i];
  }
  double d2 = norm(df) / h0;
  double dm = std::max(d1, d2);
  double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  double h = std::min(100 * h0, h1);
  return std::isfinite(h) && h > 0 ? h : 1e-6;
}

/**
 * @brief Adaptive integration of y' = f(t, y) from t0 to exactly t1 (t1 > t0).
 *
 * Throws Error when the step size collapses below h_min or the step budget runs out;
 * callers that need a diagnosis instead of an exception drive dopri5_trial themselves.
 */
template <std::size_t N, typename F>
State<N> integrate_to(F& f, double t0, double t1, State<N> y, double rtol, double atol, double h_min = 1e-14,
                      long max_steps = 1'000'000) {
  State<N> f0{};
  f(t0, y, f0);
  double t = t0;
  double h = t1 - t0;
  PiController ctl;
  for (long step = 0; t < t1; ++step) {
    if (step >= max_steps) {
      throw Error("integrate_to: step budget exhausted");
    }
    bool last = h >= t1 - t;
    double hh = last ? t1 - t : h;
    TrialStep<N> trial = dopri5_trial<N>(f, t, y, f0, hh, rtol, atol);
    if (!trial.finite) {
      h = hh * ctl.reject_nonfinite();
    } else if (trial.error <= 1.0) {
      t = last ? t1 : t + hh;
      y = trial.y;
      f0 = trial.f_end;
      h = hh * ctl.accept(trial.error);
      continue;
    } else {
      h = hh * ctl.reject(trial.error);
    }
    if (h < h_min * std::max(1.0, std::abs(t))) {
      throw Error("integrate_to: step size below floor");
    }
  }
  return y;
}

} // namespace walker::ode
