#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "walker/catalog.hpp"
#include "walker/certificate.hpp"
#include "walker/closed_forms.hpp"
#include "walker/geodesic.hpp"
#include "walker/ode.hpp"
#include "walker/strict_reference.hpp"

using namespace walker;
using walker::testing::random_poly_in;

namespace {

struct Fixture {
  explicit Fixture(const WalkerMetric& m) : field(m), sys(field) {}
  CurvatureField field;
  GeodesicSystem sys;
};

WalkerMetric flat() { return make_metric("flat", "0", "0", "0"); }

GeodesicState state(Point4<double> x, Vec4<double> v, double t = 0) { return {t, x, v}; }

IntegrationOptions horizon(double h) {
  IntegrationOptions o;
  o.horizon = h;
  return o;
}

Frame coordinate_frame() {
  Frame f{};
  for (std::size_t a = 0; a < 4; ++a) {
    f[a][a] = 1.0;
  }
  return f;
}

} // namespace

TEST(Ode, DormandPrinceTracksExponential) {
  auto f = [](double, const ode::State<1>& y, ode::State<1>& dy) { dy[0] = y[0]; };
  ode::State<1> y{1.0};
  y = ode::integrate_to<1>(f, 0.0, 2.0, y, 1e-10, 1e-12);
  EXPECT_NEAR(y[0], std::exp(2.0), 1e-8);
}

TEST(Ode, FixedStepErrorIsFifthOrder) {
  // one step of the propagated (fifth-order) solution; halving h divides the error by ~32
  auto f = [](double, const ode::State<1>& y, ode::State<1>& dy) { dy[0] = -2 * y[0]; };
  auto err = [&f](double h) {
    ode::State<1> y{1.0}, f0{};
    f(0.0, y, f0);
    ode::TrialStep<1> s = ode::dopri5_trial<1>(f, 0.0, y, f0, h, 1e-6, 1e-6);
    return std::abs(s.y[0] - std::exp(-2 * h));
  };
  double ratio = err(0.1) / err(0.05);
  EXPECT_GT(ratio, 50.0);
  EXPECT_LT(ratio, 80.0);
}

TEST(GeodesicRhs, Examples) {
  Fixture fl(flat());
  auto [xd, vd] = geodesic_rhs(fl.sys, state({1, 2, 3, 4}, {5, 6, 7, 8}));
  EXPECT_EQ(xd, (Vec4<double>{5, 6, 7, 8}));
  EXPECT_EQ(vd, (Vec4<double>{0, 0, 0, 0}));

  CounterRng rng(41);
  WalkerMetric strict;
  strict.psi33 = random_poly_in(rng, 0b1100, 4, 3);
  strict.psi34 = random_poly_in(rng, 0b1100, 4, 3);
  strict.psi44 = random_poly_in(rng, 0b1100, 4, 3);
  Fixture st(strict);
  Vec4<double> a = st.sys.acceleration({0.3, -1, 0.7, 1.2}, {1, -2, 0.5, 0.25});
  EXPECT_EQ(a[2], 0.0);
  EXPECT_EQ(a[3], 0.0);

  Fixture d2(make_metric("2d", "0", "x1*x3 + x2*x4", "0"));
  for (double h : {0.5, 2.0}) {
    double hd = 1.5;
    Vec4<double> acc = d2.sys.acceleration({0, 0, h, h}, {0, 0, hd, hd});
    EXPECT_NEAR(acc[2], hd * hd * h, 1e-14);
    EXPECT_NEAR(acc[3], hd * hd * h, 1e-14);
  }
}

TEST(GeodesicRhs, MatchesReducedEquations) {
  CounterRng rng(42);
  for (int n = 0; n < 20; ++n) {
    WalkerMetric m = walker::testing::psi34_metric(walker::testing::random_poly(rng, 5, 3));
    Fixture fx(m);
    Point4<double> x{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    Vec4<double> v{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    Vec4<double> got = fx.sys.acceleration(x, v);
    Vec4<double> want = closed_form_geodesic_acceleration(m, x, v);
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_NEAR(got[i], want[i], 1e-10 * std::max(1.0, std::abs(want[i])));
    }
  }
}

TEST(IntegrateGeodesic, FlatIsLinear) {
  Fixture fl(flat());
  GeodesicState s0 = state({1, -1, 2, 0.5}, {0.3, -0.7, 1.1, 2});
  GeodesicRun run = integrate_geodesic(fl.sys, s0, horizon(100));
  ASSERT_TRUE(run.outcome.completed());
  EXPECT_EQ(std::get<Completed>(run.outcome.verdict).t, 100.0);
  for (const auto& s : run.trajectory.samples) {
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_NEAR(s.x[i], s0.x[i] + s0.v[i] * s.t, 1e-10);
    }
  }
  ASSERT_EQ(run.trajectory.steps.size(), run.trajectory.samples.size());
  for (std::size_t s = 1; s < run.trajectory.samples.size(); ++s) {
    EXPECT_GT(run.trajectory.samples[s].t, run.trajectory.samples[s - 1].t);
  }
}

TEST(IntegrateGeodesic, OssermanLogGeodesic) {
  const CatalogEntry& e = catalog_entry("thm51-k1");
  Fixture fx(e.metric);
  GeodesicState s0 = state({0.25, 0, 0, 1}, {0, 0, 1, 0});
  GeodesicRun run = integrate_geodesic(fx.sys, s0, horizon(10));
  ASSERT_TRUE(run.outcome.blowup()) << run.outcome.verdict_name();
  const Blowup& b = std::get<Blowup>(run.outcome.verdict);
  EXPECT_GE(b.t_star, 0.99);
  EXPECT_LE(b.t_star, 1.01);
  EXPECT_GT(b.t_star_uncertainty, 0.0);
  EXPECT_EQ(b.diverging_quantity, "v3");
  for (const auto& s : run.trajectory.samples) {
    if (s.t <= 0.9) {
      EXPECT_NEAR(s.x[2], -std::log1p(-s.t), 1e-6);
    }
  }
}

TEST(IntegrateGeodesic, QuadraticBlowupClosedForm) {
  Fixture fx(make_metric("1a", "0", "x1^2 - x2^2", "0"));
  GeodesicRun run = integrate_geodesic(fx.sys, state({1, 0, 0, 0}, {1, 0, 0, -1}), horizon(10));
  ASSERT_TRUE(run.outcome.blowup());
  double t_star = std::get<Blowup>(run.outcome.verdict).t_star;
  EXPECT_NEAR(t_star, 1.0, 1e-2);
  for (const auto& s : run.trajectory.samples) {
    if (s.t <= 0.9) {
      EXPECT_NEAR(s.x[0], 1.0 / (1.0 - s.t), 1e-6);
    }
  }
}

TEST(IntegrateGeodesic, OptionsAndBudgets) {
  Fixture fl(flat());
  GeodesicState s0 = state({0, 0, 0, 0}, {1, 1, 1, 1});
  IntegrationOptions bad;
  bad.rtol = -1;
  EXPECT_THROW(integrate_geodesic(fl.sys, s0, bad), InvalidOptions);
  EXPECT_THROW(integrate_geodesic(fl.sys, state({0, 0, 0, 0}, {1, 1, 1, 1}, 2.0), horizon(1)), InvalidOptions);

  Fixture fx(make_metric("1a", "0", "x1^2 - x2^2", "0"));
  IntegrationOptions few = horizon(10);
  few.max_steps = 5;
  GeodesicRun run = integrate_geodesic(fx.sys, state({1, 0, 0, 0}, {1, 0, 0, -1}), few);
  ASSERT_TRUE(run.outcome.exhausted());
  EXPECT_EQ(std::get<BudgetExhausted>(run.outcome.verdict).reason, "max_steps");
  EXPECT_EQ(run.outcome.stats.steps, 5);

  // growth below v_max is not diagnosed as blowup
  IntegrationOptions high = horizon(10);
  high.v_max = 1e300;
  GeodesicRun capped = integrate_geodesic(fx.sys, state({1, 0, 0, 0}, {1, 0, 0, -1}), high);
  EXPECT_TRUE(capped.outcome.exhausted());
}

TEST(IntegrateGeodesic, EnergyConservedOnCompletedRuns) {
  CounterRng rng(43);
  for (int n = 0; n < 5; ++n) {
    Fixture fx(random_strict_metric(rng));
    GeodesicState s0 = state({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
                             {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1)});
    GeodesicRun run = integrate_geodesic(fx.sys, s0, horizon(20));
    ASSERT_TRUE(run.outcome.completed());
    EXPECT_LT(energy_drift(run.trajectory), 1e-7);
  }
}

TEST(IntegrateGeodesic, TimeReversal) {
  CounterRng rng(44);
  for (int n = 0; n < 4; ++n) {
    Fixture fx(n == 0 ? flat() : random_strict_metric(rng));
    GeodesicState s0 = state({0.5, -0.5, 0.2, 0.1}, {0.3, 0.2, 0.1, -0.05});
    GeodesicState end = integrate_geodesic(fx.sys, s0, horizon(5)).trajectory.samples.back();
    GeodesicState back = state(end.x, {-end.v[0], -end.v[1], -end.v[2], -end.v[3]});
    GeodesicState again = integrate_geodesic(fx.sys, back, horizon(5)).trajectory.samples.back();
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_NEAR(again.x[i], s0.x[i], 1e-6);
      EXPECT_NEAR(-again.v[i], s0.v[i], 1e-6);
    }
  }
}

TEST(ParallelTransport, FlatFrameIsConstant) {
  Fixture fl(flat());
  GeodesicRun run = integrate_geodesic(fl.sys, state({0, 0, 0, 0}, {1, 2, 3, 4}), horizon(3));
  FrameTrajectory fr = parallel_transport(fl.sys, run.trajectory, coordinate_frame());
  for (std::size_t a = 0; a < 4; ++a) {
    for (const auto& e : fr.e[a]) {
      for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(e[i], a == i ? 1.0 : 0.0);
      }
    }
  }
  EXPECT_THROW(parallel_transport(fl.sys, Trajectory{}, coordinate_frame()), PreconditionViolation);
}

TEST(ParallelTransport, OssermanFrameAndCurvatureComponent) {
  const CatalogEntry& e = catalog_entry("thm51-k1");
  Fixture fx(e.metric);
  GeodesicRun run = integrate_geodesic(fx.sys, e.witness->start, horizon(10));
  FrameTrajectory fr = parallel_transport(fx.sys, run.trajectory, coordinate_frame());
  for (std::size_t s = 0; s < run.trajectory.samples.size(); ++s) {
    EXPECT_NEAR(fr.e[0][s][0], std::exp(-run.trajectory.samples[s].x[2]), 1e-6);
  }
  EXPECT_LT(gram_drift(fx.sys, run.trajectory, fr), 1e-9);

  const ComponentLaw& law = *e.witness->component_law;
  std::vector<double> comp = monitor(fx.sys, run.trajectory, CurvatureComponentMonitor{{1, 3, 3, 4}}, &fr);
  double peak = 0;
  for (std::size_t s = 0; s < comp.size(); ++s) {
    double expect = law.coefficient * std::expm1(2 * run.trajectory.samples[s].x[2]);
    EXPECT_LE(std::abs(comp[s] - expect), 1e-5 * std::max(1.0, std::abs(expect)));
    peak = std::max(peak, std::abs(comp[s]));
  }
  EXPECT_GT(peak, 1e4);
  EXPECT_THROW(monitor(fx.sys, run.trajectory, CurvatureComponentMonitor{{1, 3, 3, 4}}), MissingFrame);
}

TEST(Monitors, FlatIsZeroAndEnergyConstant) {
  Fixture fl(flat());
  GeodesicRun run = integrate_geodesic(fl.sys, state({0, 0, 0, 0}, {1, 2, 3, 4}), horizon(2));
  FrameTrajectory fr = parallel_transport(fl.sys, run.trajectory, coordinate_frame());
  for (double r : monitor(fl.sys, run.trajectory, RicciMonitor{})) {
    EXPECT_EQ(r, 0.0);
  }
  for (double c : monitor(fl.sys, run.trajectory, CurvatureComponentMonitor{{1, 2, 1, 2}}, &fr)) {
    EXPECT_EQ(c, 0.0);
  }
  for (double en : monitor(fl.sys, run.trajectory, EnergyMonitor{})) {
    EXPECT_NEAR(en, 2 * (1 * 3 + 2 * 4), 1e-12);
  }
  EXPECT_EQ(monitor_name(CurvatureComponentMonitor{{1, 3, 3, 4}}), "R_e1e3e3e4");
}

TEST(Monitors, SymmetricRicciLaw) {
  Fixture fx(make_metric("2d", "0", "x1*x3 + x2*x4", "0"));
  GeodesicRun run = integrate_geodesic(fx.sys, state({0, 0, 1, 1}, {0, 0, 1, 1}), horizon(10));
  ASSERT_TRUE(run.outcome.blowup());
  std::vector<double> ricci = monitor(fx.sys, run.trajectory, RicciMonitor{});
  for (std::size_t s = 0; s < ricci.size(); ++s) {
    double v3 = run.trajectory.samples[s].v[2];
    EXPECT_LE(std::abs(ricci[s] + 2 * v3 * v3), 1e-6 * 2 * v3 * v3);
  }
}

TEST(StrictReference, FlatAndPreconditions) {
  WalkerMetric fl = flat();
  GeodesicState s0 = state({1, 2, 3, 4}, {0.5, -1, 0.25, 2});
  Trajectory ref = strict_geodesic_reference(fl, s0, 10, 50);
  ASSERT_EQ(ref.samples.size(), 51U);
  for (const auto& s : ref.samples) {
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_NEAR(s.x[i], s0.x[i] + s0.v[i] * s.t, 1e-12);
    }
  }
  EXPECT_THROW(strict_geodesic_reference(make_metric("bad", "x1", "0", "0"), s0, 1), PreconditionViolation);
}

TEST(StrictReference, QuadraticPsi33) {
  Fixture fx(make_metric("q", "x3^2", "0", "0"));
  GeodesicState s0 = state({0.5, 0, 0.25, 0}, {0, 0.1, 1, 0});
  GeodesicState a = integrate_geodesic(fx.sys, s0, horizon(3)).trajectory.samples.back();
  GeodesicState q = strict_geodesic_reference(fx.field.metric(), s0, 3).samples.back();
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(a.x[i], q.x[i], 1e-8);
  }
  // x1'' = -x3 with x3 = 1/4 + t
  EXPECT_NEAR(q.x[0], 0.5 - (0.25 * 9 / 2 + 27.0 / 6), 1e-10);
}

TEST(StrictReference, AgreesWithIntegratorOnRandomStrictMetrics) {
  CounterRng rng(45);
  for (int n = 0; n < 5; ++n) {
    Fixture fx(random_strict_metric(rng));
    GeodesicState s0 = state({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
                             {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-0.002, 0.002),
                              rng.uniform(-0.002, 0.002)});
    GeodesicRun run = integrate_geodesic(fx.sys, s0, horizon(100));
    ASSERT_TRUE(run.outcome.completed());
    GeodesicState a = run.trajectory.samples.back();
    GeodesicState q = strict_geodesic_reference(fx.field.metric(), s0, 100).samples.back();
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_NEAR(a.x[i], q.x[i], 1e-7);
    }
  }
}

TEST(Certificate, Examples) {
  auto verdict = [](Rational e, Rational a, Rational b) { return blowup_certificate({e, a, b}); };
  EXPECT_EQ(verdict(1, 1, 1), CertificateVerdict::certified_blowup);
  EXPECT_EQ(verdict(1, 2, 1), CertificateVerdict::certified_blowup);
  EXPECT_EQ(verdict(1, 1, 2), CertificateVerdict::certified_blowup);
  EXPECT_EQ(verdict(1, 1, 0), CertificateVerdict::not_applicable);
  EXPECT_EQ(verdict(1, 1, Rational(999, 1000)), CertificateVerdict::not_applicable);
  EXPECT_EQ(verdict(0, 2, 2), CertificateVerdict::not_applicable);
  EXPECT_EQ(verdict(1, -1, 6), CertificateVerdict::not_applicable);
  EXPECT_STREQ(to_string(CertificateVerdict::certified_blowup), "certified-blowup");
}
