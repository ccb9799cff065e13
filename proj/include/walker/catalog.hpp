#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "walker/certificate.hpp"
#include "walker/errors.hpp"
#include "walker/geodesic.hpp"
#include "walker/metric.hpp"
#include "walker/parse.hpp"
#include "walker/rng.hpp"
#include "walker/spectral.hpp"
#include "walker/upoly.hpp"

namespace walker {

enum class Completeness { complete, ricci_blowup, incomplete_curvature_blowup };

inline const char* to_string(Completeness c) {
  switch (c) {
  case Completeness::complete:
    return "complete";
  case Completeness::ricci_blowup:
    return "ricci-blowup";
  case Completeness::incomplete_curvature_blowup:
    return "incomplete-curvature-blowup";
  }
  return "?";
}

/**
 * @brief One region of a minimal-polynomial rule.
 *
 * `expected` is the minimal polynomial for unit spacelike vectors; the timelike one is
 * its reflection lambda -> -lambda. With `divides_only`, observed polynomials need only
 * divide it.
 */
struct MinPolyRegion {
  std::string name;
  std::function<bool(const Point4<Rational>&)> contains;
  std::function<UPoly(const Point4<Rational>&)> expected;
  std::function<Point4<Rational>(CounterRng&)> sample;
  bool divides_only = false;
};

/// A coordinate the witness geodesic follows in closed form on [0, t_max].
struct ClosedFormPath {
  std::size_t coordinate = 0; // 0-based into x
  std::function<double(double)> value;
  double t_max = 0.9;
  double tol = 1e-6;
  std::string formula;
};

/// R(e_a, e_b, e_c, e_d) on the coordinate-initialized parallel frame equals
/// coefficient * (exp(rate * x3) - 1).
struct ComponentLaw {
  std::array<int, 4> indices{};
  double coefficient = 0;
  double rate = 0;
  double tol = 1e-5;
};

struct BlowupWitness {
  GeodesicState start;
  std::optional<double> expected_t_star;
  std::optional<GrowthBound> bound; // exponents of the reduced scalar ODE
  std::string reduced_ode;
  std::optional<ClosedFormPath> closed_form;
  std::optional<ComponentLaw> component_law;
  std::function<double(const GeodesicState&)> ricci_law; // rho(v, v) along the witness, when known
};

struct CatalogEntry {
  std::string id;
  std::string suite; // thm31 | thm51 | thm61
  std::string description;
  WalkerMetric metric;
  OperatorKind kind = OperatorKind::jacobi;
  std::function<std::vector<Complex>(const Point4<double>&)> spectrum; // unit spacelike vectors
  std::vector<MinPolyRegion> min_poly_rules;
  std::optional<Poly4> diag_locus;
  std::function<Point4<Rational>(CounterRng&)> diag_locus_sample; // points on the locus
  Completeness completeness = Completeness::complete;
  std::optional<BlowupWitness> witness;
  bool randomized_strict = false;
  double completeness_horizon = 1e3;
  std::function<GeodesicState(CounterRng&)> random_start; // complete entries
  std::vector<std::string> notes;
};

namespace detail {

inline Rational small_rational(CounterRng& rng) {
  return {rng.uniform_int(-6, 6), rng.uniform_int(1, 5)};
}

inline Rational small_nonzero_rational(CounterRng& rng) {
  Rational r(0);
  while (r.is_zero()) {
    r = small_rational(rng);
  }
  return r;
}

inline Point4<Rational> any_point(CounterRng& rng) {
  return {small_rational(rng), small_rational(rng), small_rational(rng), small_rational(rng)};
}

inline std::function<Point4<Rational>(CounterRng&)> rejection(std::function<bool(const Point4<Rational>&)> pred) {
  return [pred = std::move(pred)](CounterRng& rng) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
      Point4<Rational> p = any_point(rng);
      if (pred(p)) {
        return p;
      }
    }
    throw SamplingBudgetExhausted();
  };
}

inline UPoly upoly(std::initializer_list<Rational> ascending) { return UPoly(std::vector<Rational>(ascending)); }

/// lambda^3 - r lambda
inline UPoly cubic_odd(const Rational& r) { return upoly({Rational(0), -r, Rational(0), Rational(1)}); }

inline MinPolyRegion everywhere(UPoly m, bool divides_only = false) {
  return {"everywhere", [](const Point4<Rational>&) { return true; }, [m](const Point4<Rational>&) { return m; },
          any_point, divides_only};
}

/// Positions in [-1, 1]^4, velocities in [-1, 1] except the listed slow components.
inline std::function<GeodesicState(CounterRng&)> box_start(Vec4<double> speed) {
  return [speed](CounterRng& rng) {
    GeodesicState s;
    for (std::size_t i = 0; i < 4; ++i) {
      s.x[i] = rng.uniform(-1, 1);
    }
    for (std::size_t i = 0; i < 4; ++i) {
      s.v[i] = rng.uniform(-speed[i], speed[i]);
    }
    return s;
  };
}

inline std::vector<Complex> zeros() { return {0.0, 0.0, 0.0, 0.0}; }

inline std::vector<Complex> radical_pair(double radicand) {
  Complex r = std::sqrt(Complex(radicand, 0.0));
  return {0.0, 0.0, r, -r};
}

/// Ricci blowup witness for psi34 with psi34_1 = p(x1) >= x1 and psi34_11 >= 1 on x1 >= 1:
/// x = (1, 0, 0, 0), v = (1, 0, 0, -1), so x1'' = x1' p(x1) with x2 = x3 = 0, x4 = -t.
inline BlowupWitness block13_witness(const Poly4& psi34) {
  BlowupWitness w;
  w.start = {0, {1, 0, 0, 0}, {1, 0, 0, -1}};
  w.bound = GrowthBound{Rational(1), Rational(1), Rational(1)};
  w.reduced_ode = "x1'' = x1' p(x1), p = d1 psi34 >= x1";
  FastPoly p1(psi34.differentiate(1));
  FastPoly p11(psi34.differentiate(1).differentiate(1));
  w.ricci_law = [p1, p11](const GeodesicState& s) {
    PowerCache pc(s.x, std::max(p1.max_exponent(), p11.max_exponent()));
    double a = p1.eval(pc);
    return -s.v[0] * p11.eval(pc) - 0.5 * a * a;
  };
  return w;
}

} // namespace detail

/// Reflection lambda -> -lambda, made monic: the timelike counterpart of a spacelike rule.
inline UPoly reflect(const UPoly& m) {
  std::vector<Rational> c = m.coeffs();
  for (std::size_t i = 1; i < c.size(); i += 2) {
    c[i] = -c[i];
  }
  return UPoly(std::move(c)).monic();
}

/**
 * @brief Random strict Walker metric: each psi_ij a sparse polynomial in (x3, x4) of
 * total degree <= 4 with small rational coefficients.
 */
inline WalkerMetric random_strict_metric(CounterRng& rng) {
  auto poly = [&rng]() {
    Poly4 p;
    for (std::uint32_t a = 0; a <= 4; ++a) {
      for (std::uint32_t b = 0; a + b <= 4; ++b) {
        if (rng.uniform() < 0.5) {
          p += Poly4::monomial({0, 0, a, b}, Rational(rng.uniform_int(-3, 3), rng.uniform_int(1, 4)));
        }
      }
    }
    return p;
  };
  WalkerMetric m;
  m.psi33 = poly();
  m.psi34 = poly();
  m.psi44 = poly();
  m.label = "random-strict";
  return m;
}

/**
 * @brief Osserman family with eigenvalues {0, 4k, k, k} for f = f(x4) non-constant, k != 0.
 *
 * The witness is the log geodesic x = (xi1, 0, 0, xi4), v = (0, 0, 1 / (4 k xi1), 0)
 * with 16 k^2 xi1^2 = f(xi4)^2 and k xi1 > 0, blowing up at t = 1; f and f' must be
 * nonzero at the supplied xi4.
 */
inline CatalogEntry osserman_family_entry(std::string id, const Rational& k, const Poly4& f, const Rational& xi4) {
  if (k.is_zero() || f.is_constant() || f.depends_on(1) || f.depends_on(2) || f.depends_on(3)) {
    throw PreconditionViolation("family needs k != 0 and non-constant f(x4)");
  }
  Poly4 fd = f.differentiate(4);
  Poly4 fdd = fd.differentiate(4);
  Poly4 x1 = Poly4::variable(1), x2 = Poly4::variable(2);
  Rational inv4k = Rational(1) / (Rational(4) * k);

  CatalogEntry e;
  e.id = std::move(id);
  e.suite = "thm51";
  e.metric.psi33 = Rational(4) * k * x1 * x1 - inv4k * f * f;
  e.metric.psi34 = Rational(4) * k * x1 * x2 + x2 * f - inv4k * fd;
  e.metric.psi44 = Rational(4) * k * x2 * x2;
  e.metric.label = e.id;
  e.metric.parameters = {{"k", k}};
  e.description = "Osserman, Jacobi spectrum {0,4k,k,k} with k = " + k.str() + ", f = " + f.render();
  e.kind = OperatorKind::jacobi;
  double kd = k.to_double();
  e.spectrum = [kd](const Point4<double>&) { return std::vector<Complex>{0.0, 4 * kd, kd, kd}; };

  Poly4 locus = Rational(24) * k * f * fd * x2 - Rational(12) * k * fdd * x1 + Rational(3) * f * fdd +
                Rational(4) * fd * fd;
  e.diag_locus = locus;
  UPoly lam = detail::upoly({Rational(0), Rational(1)});
  UPoly lk = detail::upoly({-k, Rational(1)});
  UPoly l4k = detail::upoly({Rational(-4) * k, Rational(1)});
  UPoly diag = lam * lk * l4k;
  UPoly jordan = diag * lk;
  auto on = [locus](const Point4<Rational>& p) { return eval_exact(locus, p).is_zero(); };
  auto on_sample = [locus](CounterRng& rng) {
    // The locus is affine in x1 and in x2; solve for whichever has a nonzero coefficient.
    Poly4 d1 = locus.differentiate(1), d2 = locus.differentiate(2);
    for (int attempt = 0; attempt < 10000; ++attempt) {
      Point4<Rational> p = detail::any_point(rng);
      for (std::size_t var : {0U, 1U}) {
        Point4<Rational> q = p;
        q[var] = Rational(0);
        Rational slope = eval_exact(var == 0 ? d1 : d2, q);
        if (!slope.is_zero()) {
          q[var] = -eval_exact(locus, q) / slope;
          return q;
        }
      }
      if (eval_exact(locus, p).is_zero()) {
        return p;
      }
    }
    throw SamplingBudgetExhausted();
  };
  e.min_poly_rules = {
      {"off diagonalizability locus", [on](const Point4<Rational>& p) { return !on(p); },
       [jordan](const Point4<Rational>&) { return jordan; },
       detail::rejection([on](const Point4<Rational>& p) { return !on(p); })},
      {"on diagonalizability locus", on, [diag](const Point4<Rational>&) { return diag; }, on_sample},
  };
  e.diag_locus_sample = on_sample;

  e.completeness = Completeness::incomplete_curvature_blowup;
  Point4<Rational> at{Rational(0), Rational(0), Rational(0), xi4};
  Rational f0 = eval_exact(f, at);
  Rational fd0 = eval_exact(fd, at);
  if (f0.is_zero() || fd0.is_zero()) {
    throw PreconditionViolation("witness needs f(xi4) and f'(xi4) nonzero");
  }
  // xi1 = |f(xi4)| / (4 |k|) with the sign of k, so 4 k xi1 = |f(xi4)| > 0.
  Rational xi1 = abs(f0) / (Rational(4) * abs(k));
  if (k.sign() < 0) {
    xi1 = -xi1;
  }
  double rate = (Rational(4) * k * xi1).to_double();
  BlowupWitness w;
  w.start = {0, {xi1.to_double(), 0, 0, xi4.to_double()}, {0, 0, 1.0 / rate, 0}};
  w.expected_t_star = 1.0;
  w.reduced_ode = "x3'' = 4 k xi1 x3'^2";
  w.closed_form = ClosedFormPath{2, [rate](double t) { return -std::log1p(-t) / rate; }, 0.9, 1e-6,
                                 "x3 = -ln(1 - t) / (4 k xi1)"};
  w.component_law = ComponentLaw{{1, 3, 3, 4}, fd0.to_double(), 2 * rate, 1e-5};
  e.witness = w;
  e.notes.push_back("Einstein, so no Ricci blowup; incompleteness is witnessed by R(e1,e3,e3,e4) on a parallel frame");
  return e;
}

namespace detail {

inline CatalogEntry conformal_entry(std::string id, std::string psi34, std::string description) {
  CatalogEntry e;
  e.id = "thm61-" + id;
  e.suite = "thm61";
  e.metric = make_metric(e.id, "0", psi34, "0");
  e.description = "psi34 = " + psi34 + "; " + std::move(description);
  e.kind = OperatorKind::conformal;
  e.completeness = Completeness::ricci_blowup;
  return e;
}

inline Point4<Rational> with(Point4<Rational> p, std::size_t i, const Rational& v) {
  p[i] = v;
  return p;
}

} // namespace detail

/// The example metrics, ordered by id.
inline std::vector<CatalogEntry> catalog_entries() {
  using detail::conformal_entry;
  using detail::cubic_odd;
  using detail::upoly;
  using detail::with;
  using P = Point4<Rational>;
  std::vector<CatalogEntry> out;

  {
    CatalogEntry e;
    e.id = "thm31-strict";
    e.suite = "thm31";
    e.description = "strict Walker (psi depends on x3, x4 only): nilpotent Osserman, complete; randomized";
    CounterRng rng(31);
    e.metric = random_strict_metric(rng);
    e.metric.label = e.id;
    e.kind = OperatorKind::jacobi;
    e.spectrum = [](const Point4<double>&) { return detail::zeros(); };
    e.min_poly_rules = {detail::everywhere(UPoly::power(2), true)};
    e.completeness = Completeness::complete;
    e.randomized_strict = true;
    e.completeness_horizon = 1e4;
    // Coordinates grow like powers of t * (x3', x4'); slow transverse speeds keep the
    // energy cancellation within double precision at the horizon.
    e.random_start = detail::box_start({1.0, 1.0, 1.0 / 500, 1.0 / 500});
    e.notes.push_back("completeness is numerical evidence at finite horizon, not proof");
    out.push_back(std::move(e));
  }

  out.push_back(osserman_family_entry("thm51-k1", Rational(1), Poly4::variable(4), Rational(1)));
  {
    Poly4 x4 = Poly4::variable(4);
    out.push_back(osserman_family_entry("thm51-km12", Rational(-1, 2), x4 * x4, Rational(1)));
  }

  // Block 1: Jordan normal form constant.
  {
    CatalogEntry e = conformal_entry("1a", "x1^2 - x2^2", "Spec_W {0,0,+-1/2}");
    e.spectrum = [](const Point4<double>&) { return detail::radical_pair(0.25); };
    e.min_poly_rules = {detail::everywhere(cubic_odd(Rational(1, 4)))};
    e.witness = detail::block13_witness(e.metric.psi34);
    e.witness->closed_form =
        ClosedFormPath{0, [](double t) { return 1.0 / (1.0 - t); }, 0.9, 1e-6, "x1 = 1 / (1 - t)"};
    e.witness->expected_t_star = 1.0;
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e = conformal_entry("1b", "x1^2 + x2^2", "Spec_W {0,0,+-i/2}");
    e.spectrum = [](const Point4<double>&) { return detail::radical_pair(-0.25); };
    e.min_poly_rules = {detail::everywhere(cubic_odd(Rational(-1, 4)))};
    e.witness = detail::block13_witness(e.metric.psi34);
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e = conformal_entry("1c", "x1*x4 + x3*x4", "Spec_W {0}, m = lambda^2; complete");
    e.spectrum = [](const Point4<double>&) { return detail::zeros(); };
    e.min_poly_rules = {detail::everywhere(UPoly::power(2))};
    e.completeness = Completeness::complete;
    e.completeness_horizon = 1e3;
    // x3' grows like exp(x4'^2 t^2 / 2) along x4 = x4(0) + x4' t.
    e.random_start = detail::box_start({1.0, 1.0, 1.0, 1.0 / 1000});
    e.notes.push_back("completeness is numerical evidence at finite horizon, not proof");
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e = conformal_entry("1d", "x1^2", "Spec_W {0}, m = lambda^3");
    e.spectrum = [](const Point4<double>&) { return detail::zeros(); };
    e.min_poly_rules = {detail::everywhere(UPoly::power(3))};
    e.witness = detail::block13_witness(e.metric.psi34);
    out.push_back(std::move(e));
  }

  // Block 2: nilpotent, Jordan normal form varies.
  {
    CatalogEntry e = conformal_entry("2a", "x2*x4^2 + x3^2*x4", "Spec_W {0}, Jordan form varies");
    e.spectrum = [](const Point4<double>&) { return detail::zeros(); };
    auto r1 = [](const P& p) { return !p[3].is_zero(); };
    auto r2 = [](const P& p) { return p[3].is_zero() && !p[2].is_zero(); };
    auto r3 = [](const P& p) { return p[3].is_zero() && p[2].is_zero(); };
    e.min_poly_rules = {
        {"x4 != 0", r1, [](const P&) { return UPoly::power(3); }, detail::rejection(r1)},
        {"x4 = 0, x3 != 0", r2, [](const P&) { return UPoly::power(2); },
         [](CounterRng& rng) { return with(with(detail::any_point(rng), 3, 0), 2, detail::small_nonzero_rational(rng)); }},
        {"x3 = x4 = 0", r3, [](const P&) { return UPoly::power(1); },
         [](CounterRng& rng) { return with(with(detail::any_point(rng), 3, 0), 2, 0); }},
    };
    BlowupWitness w;
    w.start = {0, {0, 0, 0, 1}, {0, 0, 1, 1}};
    w.bound = GrowthBound{Rational(1), Rational(1), Rational(2)};
    w.reduced_ode = "x3 = t, x4'' = x4' x4^2";
    w.ricci_law = [](const GeodesicState& s) {
      double x4 = s.x[3];
      return -0.5 * s.v[2] * s.v[2] * x4 * x4 * x4 * x4 - 2 * s.v[2] * s.v[3] * x4;
    };
    e.witness = w;
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e = conformal_entry("2b", "x2*x4^2 + x3*x4", "Spec_W {0}, Jordan form varies");
    e.spectrum = [](const Point4<double>&) { return detail::zeros(); };
    auto r1 = [](const P& p) { return !p[3].is_zero(); };
    auto r2 = [](const P& p) { return p[3].is_zero(); };
    e.min_poly_rules = {
        {"x4 != 0", r1, [](const P&) { return UPoly::power(3); }, detail::rejection(r1)},
        {"x4 = 0", r2, [](const P&) { return UPoly::power(2); },
         [](CounterRng& rng) { return with(detail::any_point(rng), 3, 0); }},
    };
    BlowupWitness w;
    w.start = {0, {0, 0, 0, 1}, {0, 0, 1, 1}};
    w.bound = GrowthBound{Rational(1), Rational(1), Rational(2)};
    w.reduced_ode = "x3 = t, x4'' = x4' x4^2";
    w.ricci_law = [](const GeodesicState& s) {
      double x4 = s.x[3];
      return -0.5 * s.v[2] * s.v[2] * x4 * x4 * x4 * x4 - 2 * s.v[2] * s.v[3] * x4;
    };
    e.witness = w;
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e = conformal_entry("2c", "x1*x3^2", "Spec_W {0}, Jordan form varies");
    e.spectrum = [](const Point4<double>&) { return detail::zeros(); };
    auto r1 = [](const P& p) { return !p[2].is_zero(); };
    auto r2 = [](const P& p) { return p[2].is_zero(); };
    e.min_poly_rules = {
        {"x3 != 0", r1, [](const P&) { return UPoly::power(3); }, detail::rejection(r1)},
        {"x3 = 0", r2, [](const P&) { return UPoly::power(1); },
         [](CounterRng& rng) { return with(detail::any_point(rng), 2, 0); }},
    };
    BlowupWitness w;
    w.start = {0, {0, 0, 1, 0}, {0, 0, 1, 1}};
    w.bound = GrowthBound{Rational(1), Rational(1), Rational(2)};
    w.reduced_ode = "x4 = t, x3'' = x3' x3^2";
    w.ricci_law = [](const GeodesicState& s) {
      double x3 = s.x[2];
      return -2 * s.v[2] * s.v[3] * x3 - 0.5 * s.v[3] * s.v[3] * x3 * x3 * x3 * x3;
    };
    e.witness = w;
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e = conformal_entry("2d", "x1*x3 + x2*x4", "Spec_W {0}, Jordan form varies");
    e.spectrum = [](const Point4<double>&) { return detail::zeros(); };
    auto q = [](const P& p) { return p[0] * p[2] + p[1] * p[3]; };
    auto r1 = [q](const P& p) { return !q(p).is_zero(); };
    auto r2 = [q](const P& p) { return q(p).is_zero(); };
    e.min_poly_rules = {
        {"x1 x3 + x2 x4 != 0", r1, [](const P&) { return UPoly::power(2); }, detail::rejection(r1)},
        {"x1 x3 + x2 x4 = 0", r2, [](const P&) { return UPoly::power(1); },
         [](CounterRng& rng) {
           P p = detail::any_point(rng);
           p[3] = detail::small_nonzero_rational(rng);
           p[1] = -(p[0] * p[2]) / p[3];
           return p;
         }},
    };
    BlowupWitness w;
    w.start = {0, {0, 0, 1, 1}, {0, 0, 1, 1}};
    w.bound = GrowthBound{Rational(1), Rational(2), Rational(1)};
    w.reduced_ode = "x3 = x4 = h, h'' = h'^2 h";
    w.ricci_law = [](const GeodesicState& s) { return -2 * s.v[2] * s.v[2]; };
    e.witness = w;
    e.notes.push_back("initial data x3(0) = x3'(0) = x4(0) = x4'(0) = 1, all at t = 0; the source mixes t = 0 and t = 1");
    out.push_back(std::move(e));
  }

  // Block 3: eigenvalues vary from point to point. Min-poly rules follow from the
  // spectrum with 0 semisimple where r != 0.
  {
    CatalogEntry e = conformal_entry("3a", "x1^4 + x1^2 - x2^4 - x2^2", "Spec_W {0,0,+-sqrt((6x1^2+1)(6x2^2+1))/2}");
    e.spectrum = [](const Point4<double>& p) {
      return detail::radical_pair(0.25 * (6 * p[0] * p[0] + 1) * (6 * p[1] * p[1] + 1));
    };
    e.min_poly_rules = {detail::everywhere(UPoly())};
    e.min_poly_rules[0].expected = [](const P& p) {
      return cubic_odd(Rational(1, 4) * (Rational(6) * p[0] * p[0] + Rational(1)) *
                       (Rational(6) * p[1] * p[1] + Rational(1)));
    };
    e.witness = detail::block13_witness(e.metric.psi34);
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e = conformal_entry("3b", "x1^4 + x1^2 + x2^4 + x2^2", "Spec_W {0,0,+-sqrt(-(6x1^2+1)(6x2^2+1))/2}");
    e.spectrum = [](const Point4<double>& p) {
      return detail::radical_pair(-0.25 * (6 * p[0] * p[0] + 1) * (6 * p[1] * p[1] + 1));
    };
    e.min_poly_rules = {detail::everywhere(UPoly())};
    e.min_poly_rules[0].expected = [](const P& p) {
      return cubic_odd(Rational(-1, 4) * (Rational(6) * p[0] * p[0] + Rational(1)) *
                       (Rational(6) * p[1] * p[1] + Rational(1)));
    };
    e.witness = detail::block13_witness(e.metric.psi34);
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e = conformal_entry("3c", "x1^3 - x2^3", "Spec_W {0,0,+-(3/2)sqrt(x1 x2)}");
    e.spectrum = [](const Point4<double>& p) { return detail::radical_pair(2.25 * p[0] * p[1]); };
    auto r1 = [](const P& p) { return !(p[0] * p[1]).is_zero(); };
    auto r2 = [](const P& p) { return p[0].is_zero() != p[1].is_zero(); };
    auto r3 = [](const P& p) { return p[0].is_zero() && p[1].is_zero(); };
    e.min_poly_rules = {
        {"x1 x2 != 0", r1, [](const P& p) { return cubic_odd(Rational(9, 4) * p[0] * p[1]); }, detail::rejection(r1)},
        {"exactly one of x1, x2 zero", r2, [](const P&) { return UPoly::power(3); },
         [](CounterRng& rng) {
           P p = detail::any_point(rng);
           std::size_t zero = rng.uniform_int(0, 1) == 0 ? 0 : 1;
           p[zero] = Rational(0);
           p[1 - zero] = detail::small_nonzero_rational(rng);
           return p;
         }},
        {"x1 = x2 = 0", r3, [](const P&) { return UPoly::power(1); },
         [](CounterRng& rng) { return with(with(detail::any_point(rng), 0, 0), 1, 0); }},
    };
    e.witness = detail::block13_witness(e.metric.psi34);
    e.notes.push_back("spectrum is imaginary where x1 x2 < 0; encoded literally with complex output");
    out.push_back(std::move(e));
  }

  std::sort(out.begin(), out.end(), [](const CatalogEntry& a, const CatalogEntry& b) { return a.id < b.id; });
  return out;
}

inline const CatalogEntry& find_entry(const std::vector<CatalogEntry>& entries, const std::string& id) {
  auto it = std::find_if(entries.begin(), entries.end(), [&id](const CatalogEntry& e) { return e.id == id; });
  if (it == entries.end()) {
    throw InvalidOptions("unknown catalog id: " + id);
  }
  return *it;
}

inline CatalogEntry catalog_entry(const std::string& id) { return find_entry(catalog_entries(), id); }

/// Closed-form spectrum for unit spacelike vectors at p.
inline std::vector<Complex> expected_spectrum(const CatalogEntry& e, const Point4<double>& p) {
  if (!e.spectrum) {
    throw NoRuleForEntry(e.id);
  }
  std::vector<Complex> s = e.spectrum(p);
  sort_spectrum(s);
  return s;
}

inline std::vector<Complex> expected_spectrum(const CatalogEntry& e, const Point4<Rational>& p) {
  return expected_spectrum(e, to_double(p));
}

/// Exact value of the diagonalizability locus polynomial at p.
inline Rational diag_locus_value(const CatalogEntry& e, const Point4<Rational>& p) {
  if (!e.diag_locus) {
    throw WrongEntryKind(e.id);
  }
  return eval_exact(*e.diag_locus, p);
}

/// True iff the locus polynomial vanishes at p.
inline bool thm51_diag_locus(const CatalogEntry& e, const Point4<Rational>& p) {
  return diag_locus_value(e, p).is_zero();
}

} // namespace walker
