#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "walker/curvature.hpp"
#include "walker/errors.hpp"
#include "walker/fast_poly.hpp"
#include "walker/ode.hpp"

namespace walker {

struct GeodesicState {
  double t = 0;
  Point4<double> x{};
  Vec4<double> v{};
};

/// Samples at accepted steps; every monitor series has one value per sample.
struct Trajectory {
  std::vector<GeodesicState> samples;
  /// steps[s] is the exact step taken into sample s (steps[0] = 0). Sample times are its
  /// rounded running sums, so near a blowup time t_{s} - t_{s-1} can be far less accurate.
  std::vector<double> steps;
  std::map<std::string, std::vector<double>> monitors;
};

struct IntegrationOptions {
  double horizon = 1.0;
  double rtol = 1e-8;
  double atol = 1e-10;
  double h_min = 1e-12;
  double v_max = 1e8;
  long max_steps = 2'000'000;

  void validate(double t0) const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0; };
    if (!positive(rtol) || !positive(atol) || !positive(h_min) || !positive(v_max) || max_steps <= 0) {
      throw InvalidOptions("integration options must be positive and finite");
    }
    if (!std::isfinite(horizon) || horizon <= t0) {
      throw InvalidOptions("horizon must exceed the initial time");
    }
  }
};

struct Completed {
  double t = 0;
};

struct Blowup {
  double t_star = 0;
  double t_star_uncertainty = 0;
  std::string diverging_quantity;
};

struct BudgetExhausted {
  std::string reason;
};

struct IntegrationStats {
  long steps = 0;
  long rejected = 0;
  double min_step = 0;
};

struct IntegrationOutcome {
  std::variant<Completed, Blowup, BudgetExhausted> verdict;
  IntegrationStats stats;

  [[nodiscard]] bool completed() const { return std::holds_alternative<Completed>(verdict); }
  [[nodiscard]] bool blowup() const { return std::holds_alternative<Blowup>(verdict); }
  [[nodiscard]] bool exhausted() const { return std::holds_alternative<BudgetExhausted>(verdict); }
  [[nodiscard]] std::string verdict_name() const {
    return completed() ? "Completed" : blowup() ? "Blowup" : "BudgetExhausted";
  }
};

struct GeodesicRun {
  Trajectory trajectory;
  IntegrationOutcome outcome;
};

/**
 * @brief Float-path view of a CurvatureField: only the nonzero polynomial entries,
 * flattened for repeated evaluation along trajectories.
 *
 * Immutable after construction, so one instance may serve concurrent integrations.
 */
class GeodesicSystem {
public:
  explicit GeodesicSystem(const CurvatureField& field) {
    for (std::size_t k = 0; k < 4; ++k) {
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i; j < 4; ++j) {
          const Poly4& p = field.christoffel()[k][i][j];
          if (!p.is_zero()) {
            gamma_.push_back({k, i, j, i == j ? 1.0 : 2.0, track(FastPoly(p))});
          }
        }
      }
    }
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i; j < 4; ++j) {
        if (!field.g()(i, j).is_zero()) {
          metric_.push_back({i, j, i == j ? 1.0 : 2.0, track(FastPoly(field.g()(i, j)))});
        }
        if (!field.ricci()(i, j).is_zero()) {
          ricci_.push_back({i, j, i == j ? 1.0 : 2.0, track(FastPoly(field.ricci()(i, j)))});
        }
      }
    }
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t k = 0; k < 4; ++k) {
          for (std::size_t l = 0; l < 4; ++l) {
            const Poly4& p = field.riemann()[i][j][k][l];
            if (!p.is_zero()) {
              riemann_.push_back({{i, j, k, l}, track(FastPoly(p))});
            }
          }
        }
      }
    }
  }

  /// v' = -Gamma^k_ij v^i v^j
  [[nodiscard]] Vec4<double> acceleration(const Point4<double>& x, const Vec4<double>& v) const {
    PowerCache pc(x, max_exponent_);
    Vec4<double> a{};
    for (const auto& e : gamma_) {
      a[e.k] -= e.weight * e.poly.eval(pc) * v[e.i] * v[e.j];
    }
    return a;
  }

  [[nodiscard]] Christoffel<double> christoffel(const Point4<double>& x) const {
    PowerCache pc(x, max_exponent_);
    Christoffel<double> c = zero_christoffel<double>();
    for (const auto& e : gamma_) {
      double val = e.poly.eval(pc);
      c[e.k][e.i][e.j] = val;
      c[e.k][e.j][e.i] = val;
    }
    return c;
  }

  /// g(v, v) at x
  [[nodiscard]] double energy(const Point4<double>& x, const Vec4<double>& v) const {
    return quadratic(metric_, x, v, v);
  }

  [[nodiscard]] double inner(const Point4<double>& x, const Vec4<double>& a, const Vec4<double>& b) const {
    return quadratic(metric_, x, a, b);
  }

  /// rho(v, v) at x
  [[nodiscard]] double ricci_quadratic(const Point4<double>& x, const Vec4<double>& v) const {
    return quadratic(ricci_, x, v, v);
  }

  /// Lowered R(a, b, c, d) at x, same slot convention as CurvatureField::riemann().
  [[nodiscard]] double riemann(const Point4<double>& x, const Vec4<double>& a, const Vec4<double>& b,
                               const Vec4<double>& c, const Vec4<double>& d) const {
    PowerCache pc(x, max_exponent_);
    double s = 0;
    for (const auto& e : riemann_) {
      double w = a[e.idx[0]] * b[e.idx[1]] * c[e.idx[2]] * d[e.idx[3]];
      if (w != 0) {
        s += w * e.poly.eval(pc);
      }
    }
    return s;
  }

private:
  struct GammaEntry {
    std::size_t k, i, j;
    double weight;
    FastPoly poly;
  };
  struct SymEntry {
    std::size_t i, j;
    double weight;
    FastPoly poly;
  };
  struct RiemannEntry {
    std::array<std::size_t, 4> idx;
    FastPoly poly;
  };

  FastPoly track(FastPoly p) {
    max_exponent_ = std::max(max_exponent_, p.max_exponent());
    return p;
  }

  // sum_ij w_ij s_ij a^i b^j with symmetric weights; symmetric in (a, b) only up to rounding.
  [[nodiscard]] double quadratic(const std::vector<SymEntry>& entries, const Point4<double>& x,
                                 const Vec4<double>& a, const Vec4<double>& b) const {
    PowerCache pc(x, max_exponent_);
    double s = 0;
    for (const auto& e : entries) {
      double ab = e.i == e.j ? a[e.i] * b[e.i] : 0.5 * (a[e.i] * b[e.j] + a[e.j] * b[e.i]);
      s += e.weight * e.poly.eval(pc) * ab;
    }
    return s;
  }

  std::vector<GammaEntry> gamma_;
  std::vector<SymEntry> metric_;
  std::vector<SymEntry> ricci_;
  std::vector<RiemannEntry> riemann_;
  std::uint32_t max_exponent_ = 0;
};

/// (x', v') = (v, -Gamma(x)(v, v))
inline std::pair<Vec4<double>, Vec4<double>> geodesic_rhs(const GeodesicSystem& sys, const GeodesicState& s) {
  return {s.v, sys.acceleration(s.x, s.v)};
}

namespace detail {

inline ode::State<8> pack(const GeodesicState& s) {
  return {s.x[0], s.x[1], s.x[2], s.x[3], s.v[0], s.v[1], s.v[2], s.v[3]};
}

inline GeodesicState unpack(double t, const ode::State<8>& y) {
  return {t, {y[0], y[1], y[2], y[3]}, {y[4], y[5], y[6], y[7]}};
}

inline double sup_norm(const Vec4<double>& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2]), std::abs(v[3])});
}

} // namespace detail

/**
 * @brief Adaptive Dormand-Prince integration of the geodesic equation.
 *
 * Termination: Completed on reaching the horizon exactly; Blowup when the proposed
 * step falls below h_min while |v|_inf > v_max and |v|_inf grew over each of the last
 * 10 accepted steps; BudgetExhausted otherwise (step floor without the growth window,
 * or max_steps). Non-finite trial stages count as rejections. The trajectory carries
 * an "energy" monitor.
 */
inline GeodesicRun integrate_geodesic(const GeodesicSystem& sys, const GeodesicState& s0,
                                      const IntegrationOptions& opts = {}) {
  opts.validate(s0.t);
  constexpr std::size_t window = 10;

  GeodesicRun run;
  auto& samples = run.trajectory.samples;
  auto& energy = run.trajectory.monitors["energy"];
  IntegrationStats& stats = run.outcome.stats;

  auto rhs = [&sys](double, const ode::State<8>& y, ode::State<8>& dy) {
    Vec4<double> a = sys.acceleration({y[0], y[1], y[2], y[3]}, {y[4], y[5], y[6], y[7]});
    for (std::size_t i = 0; i < 4; ++i) {
      dy[i] = y[4 + i];
      dy[4 + i] = a[i];
    }
  };

  ode::State<8> y = detail::pack(s0);
  double t = s0.t;
  auto& steps = run.trajectory.steps;
  samples.push_back(s0);
  steps.push_back(0.0);
  energy.push_back(sys.energy(s0.x, s0.v));
  std::deque<double> speeds{detail::sup_norm(s0.v)};

  ode::State<8> f0{};
  rhs(t, y, f0);
  double h = std::min(ode::initial_step<8>(rhs, t, y, f0, opts.rtol, opts.atol), opts.horizon - t);
  stats.min_step = h;
  ode::PiController ctl;

  auto diagnose = [&](const char* reason) {
    bool growing = speeds.size() > window && speeds.back() > opts.v_max;
    for (std::size_t i = speeds.size() - window; growing && i < speeds.size(); ++i) {
      growing = speeds[i] > speeds[i - 1];
    }
    if (!growing) {
      run.outcome.verdict = BudgetExhausted{reason};
      return;
    }
    const GeodesicState& last = samples.back();
    double s1 = 1.0 / speeds.back();
    double s0i = 1.0 / speeds[speeds.size() - 2];
    double slope = (s1 - s0i) / steps.back();
    double t_star = slope < 0 ? last.t - s1 / slope : last.t;
    std::size_t arg = 0;
    for (std::size_t i = 1; i < 4; ++i) {
      if (std::abs(last.v[i]) > std::abs(last.v[arg])) {
        arg = i;
      }
    }
    run.outcome.verdict = Blowup{t_star, steps.back(), "v" + std::to_string(arg + 1)};
  };

  while (true) {
    if (stats.steps >= opts.max_steps) {
      run.outcome.verdict = BudgetExhausted{"max_steps"};
      return run;
    }
    bool last_step = h >= opts.horizon - t;
    double hh = last_step ? opts.horizon - t : h;
    ode::TrialStep<8> trial = ode::dopri5_trial<8>(rhs, t, y, f0, hh, opts.rtol, opts.atol);
    if (trial.finite && trial.error <= 1.0) {
      t = last_step ? opts.horizon : t + hh;
      y = trial.y;
      f0 = trial.f_end;
      ++stats.steps;
      stats.min_step = std::min(stats.min_step, hh);
      GeodesicState s = detail::unpack(t, y);
      samples.push_back(s);
      steps.push_back(hh);
      double e = 0;
      try {
        e = sys.energy(s.x, s.v);
      } catch (const EvaluationOverflow&) {
        e = std::numeric_limits<double>::infinity();
      }
      energy.push_back(e);
      speeds.push_back(detail::sup_norm(s.v));
      if (speeds.size() > window + 1) {
        speeds.pop_front();
      }
      if (last_step) {
        run.outcome.verdict = Completed{t};
        return run;
      }
      h = hh * ctl.accept(trial.error);
    } else {
      ++stats.rejected;
      h = hh * (trial.finite ? ctl.reject(trial.error) : ctl.reject_nonfinite());
    }
    if (h < opts.h_min) {
      diagnose(trial.finite ? "step_floor" : "evaluation_overflow");
      return run;
    }
  }
}

/// Four transported vectors per trajectory sample.
struct FrameTrajectory {
  std::array<std::vector<Vec4<double>>, 4> e;
};

using Frame = std::array<Vec4<double>, 4>;

struct TransportOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
};

/**
 * @brief Parallel frame along an integrated geodesic.
 *
 * Between consecutive samples the joint system (x, v, e1..e4) is re-integrated from
 * the recorded state with its own tighter error control, so the frame is known exactly
 * at the trajectory's sample times. The system is autonomous, so each interval runs over
 * the recorded step length rather than the difference of rounded sample times.
 */
inline FrameTrajectory parallel_transport(const GeodesicSystem& sys, const Trajectory& traj, const Frame& frame0,
                                          const TransportOptions& opts = {}) {
  if (traj.samples.empty()) {
    throw PreconditionViolation("parallel_transport: empty trajectory");
  }
  constexpr std::size_t n = 24;
  auto rhs = [&sys](double, const ode::State<n>& y, ode::State<n>& dy) {
    Point4<double> x{y[0], y[1], y[2], y[3]};
    Vec4<double> v{y[4], y[5], y[6], y[7]};
    Christoffel<double> c = sys.christoffel(x);
    for (std::size_t k = 0; k < 4; ++k) {
      dy[k] = v[k];
      double a = 0;
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
          a -= c[k][i][j] * v[i] * v[j];
        }
      }
      dy[4 + k] = a;
    }
    for (std::size_t f = 0; f < 4; ++f) {
      for (std::size_t k = 0; k < 4; ++k) {
        double d = 0;
        for (std::size_t i = 0; i < 4; ++i) {
          for (std::size_t j = 0; j < 4; ++j) {
            d -= c[k][i][j] * v[i] * y[8 + 4 * f + j];
          }
        }
        dy[8 + 4 * f + k] = d;
      }
    }
  };

  FrameTrajectory out;
  Frame e = frame0;
  for (std::size_t a = 0; a < 4; ++a) {
    out.e[a].reserve(traj.samples.size());
    out.e[a].push_back(e[a]);
  }
  for (std::size_t s = 1; s < traj.samples.size(); ++s) {
    const GeodesicState& from = traj.samples[s - 1];
    ode::State<n> y{};
    for (std::size_t i = 0; i < 4; ++i) {
      y[i] = from.x[i];
      y[4 + i] = from.v[i];
      for (std::size_t a = 0; a < 4; ++a) {
        y[8 + 4 * a + i] = e[a][i];
      }
    }
    double len = traj.steps.size() == traj.samples.size() ? traj.steps[s] : traj.samples[s].t - from.t;
    y = ode::integrate_to<n>(rhs, 0.0, len, y, opts.rtol, opts.atol);
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t i = 0; i < 4; ++i) {
        e[a][i] = y[8 + 4 * a + i];
      }
      out.e[a].push_back(e[a]);
    }
  }
  return out;
}

/**
 * @brief Largest change of the frame's Gram matrix along the run, each entry scaled by
 * 1 + |e_a| |e_b| (Euclidean coordinate norms) so growing frames are judged relatively.
 */
inline double gram_drift(const GeodesicSystem& sys, const Trajectory& traj, const FrameTrajectory& frame) {
  auto norm = [](const Vec4<double>& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]); };
  std::array<std::array<double, 4>, 4> g0{};
  const Point4<double>& x0 = traj.samples.front().x;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      g0[a][b] = sys.inner(x0, frame.e[a][0], frame.e[b][0]);
    }
  }
  double worst = 0;
  for (std::size_t s = 0; s < traj.samples.size(); ++s) {
    const Point4<double>& x = traj.samples[s].x;
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = a; b < 4; ++b) {
        double gab = sys.inner(x, frame.e[a][s], frame.e[b][s]);
        double scale = 1.0 + norm(frame.e[a][s]) * norm(frame.e[b][s]);
        worst = std::max(worst, std::abs(gab - g0[a][b]) / scale);
      }
    }
  }
  return worst;
}

struct EnergyMonitor {};
struct RicciMonitor {};
/// Lowered R(e_a, e_b, e_c, e_d) on transported frame vectors; indices are 1-based.
struct CurvatureComponentMonitor {
  std::array<int, 4> indices{};
};
using MonitorKind = std::variant<EnergyMonitor, RicciMonitor, CurvatureComponentMonitor>;

inline std::string monitor_name(const MonitorKind& which) {
  if (std::holds_alternative<EnergyMonitor>(which)) {
    return "energy";
  }
  if (std::holds_alternative<RicciMonitor>(which)) {
    return "ricci";
  }
  const auto& idx = std::get<CurvatureComponentMonitor>(which).indices;
  return "R_e" + std::to_string(idx[0]) + "e" + std::to_string(idx[1]) + "e" + std::to_string(idx[2]) + "e" +
         std::to_string(idx[3]);
}

/// Monitor series on the trajectory's accepted samples. Overflowing samples read as +-inf.
inline std::vector<double> monitor(const GeodesicSystem& sys, const Trajectory& traj, const MonitorKind& which,
                                   const FrameTrajectory* frame = nullptr) {
  const auto* comp = std::get_if<CurvatureComponentMonitor>(&which);
  if (comp != nullptr) {
    if (frame == nullptr) {
      throw MissingFrame();
    }
    for (int i : comp->indices) {
      if (i < 1 || i > 4) {
        throw InvalidOptions("curvature component indices must lie in 1..4");
      }
    }
    if (frame->e[0].size() != traj.samples.size()) {
      throw PreconditionViolation("frame is not aligned with the trajectory");
    }
  }
  std::vector<double> out;
  out.reserve(traj.samples.size());
  for (std::size_t s = 0; s < traj.samples.size(); ++s) {
    const GeodesicState& st = traj.samples[s];
    double val = 0;
    try {
      if (std::holds_alternative<EnergyMonitor>(which)) {
        val = sys.energy(st.x, st.v);
      } else if (std::holds_alternative<RicciMonitor>(which)) {
        val = sys.ricci_quadratic(st.x, st.v);
      } else {
        const auto& i = comp->indices;
        val = sys.riemann(st.x, frame->e[i[0] - 1][s], frame->e[i[1] - 1][s], frame->e[i[2] - 1][s],
                          frame->e[i[3] - 1][s]);
      }
    } catch (const EvaluationOverflow&) {
      val = std::numeric_limits<double>::infinity();
    }
    out.push_back(val);
  }
  return out;
}

/// Largest |E(t) - E(0)| / (1 + |E(0)|) over the energy monitor.
inline double energy_drift(const Trajectory& traj) {
  const auto& e = traj.monitors.at("energy");
  double worst = 0;
  for (double v : e) {
    worst = std::max(worst, std::abs(v - e.front()) / (1.0 + std::abs(e.front())));
  }
  return worst;
}

} // namespace walker
