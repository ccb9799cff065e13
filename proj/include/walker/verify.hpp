#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <string>
#include <string_view>
#include <vector>

#include "walker/catalog.hpp"
#include "walker/certificate.hpp"
#include "walker/curvature.hpp"
#include "walker/geodesic.hpp"
#include "walker/io.hpp"
#include "walker/spectral.hpp"
#include "walker/strict_reference.hpp"

namespace walker {

struct VerificationBudget {
  int spectrum_points = 5;
  int unit_vectors = 8;      // per causal class in each osserman_scan
  int region_points = 3;     // per min-poly region
  int region_vectors = 2;    // per causal class at each region point
  int locus_points = 50;
  int complete_starts = 20;
  int strict_metrics = 20;   // randomized instances of the strict template
  double spectrum_tol = 1e-8;
  double blowup_horizon = 10.0;
  long max_steps = 2'000'000;
};

enum class ClauseStatus { pass, fail, budget_exhausted };

inline const char* to_string(ClauseStatus s) {
  switch (s) {
  case ClauseStatus::pass:
    return "pass";
  case ClauseStatus::fail:
    return "fail";
  case ClauseStatus::budget_exhausted:
    return "budget-exhausted";
  }
  return "?";
}

struct ClauseResult {
  std::string name;
  ClauseStatus status = ClauseStatus::fail;
  io::Json witness = io::Json::object();
};

struct EntryReport {
  std::string id;
  std::vector<ClauseResult> clauses;
  std::vector<std::string> notes;

  [[nodiscard]] bool passed() const {
    return std::all_of(clauses.begin(), clauses.end(),
                       [](const ClauseResult& c) { return c.status == ClauseStatus::pass; });
  }
};

struct VerificationReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<EntryReport> entries;

  [[nodiscard]] bool passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const EntryReport& e) { return e.passed(); });
  }
};

/// Which clause groups run: spectral (spectrum, min-poly, locus) and/or dynamics.
struct ClauseSelection {
  bool spectral = true;
  bool dynamics = true;
};

namespace detail {

/// Stable 64-bit FNV-1a, used to derive per-entry random streams.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::vector<Complex> negated(std::vector<Complex> s) {
  for (auto& z : s) {
    z = -z;
  }
  return s;
}

/// Runs `body`, mapping sampling exhaustion and library errors to clause outcomes.
inline ClauseResult run_clause(std::string name, const std::function<bool(io::Json&)>& body) {
  ClauseResult out;
  out.name = std::move(name);
  try {
    out.status = body(out.witness) ? ClauseStatus::pass : ClauseStatus::fail;
  } catch (const SamplingBudgetExhausted& e) {
    out.status = ClauseStatus::budget_exhausted;
    out.witness["error"] = e.what();
  } catch (const Error& e) {
    out.status = ClauseStatus::fail;
    out.witness["error"] = e.what();
  }
  return out;
}

inline double max_abs(const std::vector<double>& xs) {
  double m = 0;
  for (double x : xs) {
    m = std::max(m, std::abs(x));
  }
  return m;
}

struct MetricInstance {
  WalkerMetric metric;
  CurvatureField field;
  explicit MetricInstance(WalkerMetric m) : metric(m), field(std::move(m)) {}
};

inline ClauseResult spectrum_clause(const CatalogEntry& e, const std::vector<MetricInstance>& inst,
                                    const VerificationBudget& b, CounterRng& rng) {
  return run_clause("spectrum", [&](io::Json& w) {
    bool ok = true;
    bool timelike_negated = true;
    w["points"] = io::Json::array();
    int n = std::max(b.spectrum_points, static_cast<int>(inst.size()));
    for (int i = 0; i < n; ++i) {
      const MetricInstance& mi = inst[static_cast<std::size_t>(i) % inst.size()];
      Point4<Rational> p = any_point(rng);
      OssermanScan scan = osserman_scan(mi.field, p, e.kind, b.unit_vectors, b.spectrum_tol, rng);
      std::vector<Complex> expected = expected_spectrum(e, p);
      bool space = spectra_match(scan.spacelike.spectrum, expected, b.spectrum_tol);
      // informational only: the expected spectrum is for spacelike directions
      bool time = spectra_match(scan.timelike.spectrum, negated(expected), b.spectrum_tol);
      timelike_negated = timelike_negated && time;
      bool good = scan.constant && space;
      ok = ok && good;
      if (!good || i < 5) {
        w["points"].push_back(io::Json{{"point", io::to_json(p)},
                                       {"constant", scan.constant},
                                       {"spacelike", io::to_json(scan.spacelike.spectrum)},
                                       {"timelike", io::to_json(scan.timelike.spectrum)},
                                       {"expected", io::to_json(expected)},
                                       {"pass", good}});
      }
      if (e.id == "thm61-3c" && p[0] * p[1] < Rational(0)) {
        w["imaginary_region_points"] = w.value("imaginary_region_points", 0) + 1;
      }
    }
    w["sampled_points"] = n;
    w["timelike_is_negated_spacelike"] = timelike_negated;
    return ok;
  });
}

inline ClauseResult min_poly_clause(const CatalogEntry& e, const std::vector<MetricInstance>& inst,
                                    const VerificationBudget& b, CounterRng& rng) {
  return run_clause("min_poly", [&](io::Json& w) {
    bool ok = true;
    w["regions"] = io::Json::array();
    std::size_t counter = 0;
    for (const MinPolyRegion& region : e.min_poly_rules) {
      io::Json rj{{"region", region.name}, {"points", io::Json::array()}};
      bool region_ok = true;
      int points = std::max(b.region_points, static_cast<int>(inst.size()));
      for (int i = 0; i < points; ++i) {
        const MetricInstance& mi = inst[counter++ % inst.size()];
        Point4<Rational> p = region.sample(rng);
        int owners = static_cast<int>(std::count_if(e.min_poly_rules.begin(), e.min_poly_rules.end(),
                                                    [&p](const MinPolyRegion& r) { return r.contains(p); }));
        bool good = region.contains(p) && owners == 1;
        CurvatureReport<Rational> rep = curvature_report(mi.field, p);
        UPoly expected = region.expected(p);
        io::Json observed = io::Json::array();
        for (int sign : {1, -1}) {
          UPoly want = sign > 0 ? expected : reflect(expected);
          for (int k = 0; k < b.region_vectors; ++k) {
            UnitVector u = sample_unit_vector(rep.g, sign, rng);
            Mat4<Rational> op = e.kind == OperatorKind::jacobi ? jacobi_operator(rep, u.direction).matrix
                                                               : conformal_jacobi_operator(rep, u.direction).matrix;
            UPoly m = min_poly(unit_normalized(op, u));
            good = good && (region.divides_only ? divides(m, want) : m == want);
            observed.push_back(m.str());
          }
        }
        region_ok = region_ok && good;
        rj["points"].push_back(io::Json{{"point", io::to_json(p)},
                                        {"expected", expected.str()},
                                        {"observed", observed},
                                        {"pass", good}});
      }
      rj["pass"] = region_ok;
      ok = ok && region_ok;
      w["regions"].push_back(rj);
    }
    return ok;
  });
}

inline ClauseResult locus_clause(const CatalogEntry& e, const MetricInstance& mi, const VerificationBudget& b,
                                 CounterRng& rng) {
  return run_clause("diag_locus", [&](io::Json& w) {
    int agree = 0, on_locus = 0;
    io::Json mismatches = io::Json::array();
    for (int i = 0; i < b.locus_points; ++i) {
      Point4<Rational> p = i % 2 == 0 ? e.diag_locus_sample(rng) : any_point(rng);
      bool locus = thm51_diag_locus(e, p);
      on_locus += locus ? 1 : 0;
      CurvatureReport<Rational> rep = curvature_report(mi.field, p);
      UnitVector u = sample_unit_vector(rep.g, 1, rng);
      bool diag = is_diagonalizable(unit_normalized(jacobi_operator(rep, u.direction).matrix, u));
      if (diag == locus) {
        ++agree;
      } else {
        mismatches.push_back(io::to_json(p));
      }
    }
    w["points"] = b.locus_points;
    w["on_locus"] = on_locus;
    w["agree"] = agree;
    w["mismatches"] = mismatches;
    return agree == b.locus_points && on_locus > 0;
  });
}

inline IntegrationOptions blowup_options(const VerificationBudget& b, double rtol) {
  IntegrationOptions o;
  o.horizon = b.blowup_horizon;
  o.rtol = rtol;
  o.atol = rtol / 100;
  o.max_steps = b.max_steps;
  return o;
}

inline void witness_clauses(const CatalogEntry& e, const MetricInstance& mi, const VerificationBudget& b,
                            std::vector<ClauseResult>& out) {
  const BlowupWitness& wit = *e.witness;
  GeodesicSystem sys(mi.field);
  GeodesicRun run = integrate_geodesic(sys, wit.start, blowup_options(b, 1e-8));
  const auto* blow = std::get_if<Blowup>(&run.outcome.verdict);

  out.push_back(run_clause("blowup_verdict", [&](io::Json& w) {
    w["start"] = io::Json{{"x", io::to_json(wit.start.x)}, {"v", io::to_json(wit.start.v)}};
    w["reduced_ode"] = wit.reduced_ode;
    w["outcome"] = io::to_json(run.outcome);
    bool ok = blow != nullptr;
    if (ok && wit.expected_t_star) {
      w["expected_t_star"] = *wit.expected_t_star;
      ok = std::abs(blow->t_star - *wit.expected_t_star) <= 1e-2;
    }
    return ok;
  }));

  out.push_back(run_clause("rtol_stability", [&](io::Json& w) {
    io::Json runs = io::Json::array();
    bool ok = true;
    double lo = 1e300, hi = -1e300;
    for (double rtol : {1e-6, 1e-8, 1e-10}) {
      GeodesicRun r = integrate_geodesic(sys, wit.start, blowup_options(b, rtol));
      const auto* bl = std::get_if<Blowup>(&r.outcome.verdict);
      runs.push_back(io::Json{{"rtol", rtol}, {"outcome", io::to_json(r.outcome)}});
      ok = ok && bl != nullptr;
      if (bl != nullptr) {
        lo = std::min(lo, bl->t_star);
        hi = std::max(hi, bl->t_star);
      }
    }
    w["runs"] = runs;
    w["t_star_spread"] = ok ? hi - lo : -1.0;
    return ok && hi - lo <= 1e-2;
  }));

  if (wit.bound) {
    out.push_back(run_clause("certificate", [&](io::Json& w) {
      w["epsilon"] = wit.bound->epsilon.str();
      w["a"] = wit.bound->a.str();
      w["b"] = wit.bound->b.str();
      CertificateVerdict v = blowup_certificate(*wit.bound);
      w["verdict"] = to_string(v);
      return v == CertificateVerdict::certified_blowup;
    }));
  }

  if (e.completeness == Completeness::ricci_blowup) {
    out.push_back(run_clause("ricci_blowup", [&](io::Json& w) {
      std::vector<double> ricci = monitor(sys, run.trajectory, RicciMonitor{});
      double peak = max_abs(ricci);
      w["max_abs_ricci"] = peak;
      w["final_ricci"] = ricci.back();
      bool ok = peak > 1e6;
      if (wit.ricci_law) {
        double worst = 0;
        for (std::size_t s = 0; s < ricci.size(); ++s) {
          double law = wit.ricci_law(run.trajectory.samples[s]);
          if (std::isfinite(law) && std::isfinite(ricci[s])) {
            worst = std::max(worst, std::abs(ricci[s] - law) / std::max(1.0, std::abs(law)));
          }
        }
        w["max_rel_deviation_from_law"] = worst;
        ok = ok && worst <= 1e-6;
      }
      return ok;
    }));
  }

  if (wit.closed_form) {
    const ClosedFormPath& cf = *wit.closed_form;
    out.push_back(run_clause("closed_form", [&](io::Json& w) {
      double worst = 0;
      for (const auto& s : run.trajectory.samples) {
        if (s.t <= cf.t_max) {
          worst = std::max(worst, std::abs(s.x[cf.coordinate] - cf.value(s.t)));
        }
      }
      w["formula"] = cf.formula;
      w["t_max"] = cf.t_max;
      w["max_abs_error"] = worst;
      return worst <= cf.tol;
    }));
  }

  if (wit.component_law) {
    const ComponentLaw& law = *wit.component_law;
    out.push_back(run_clause("parallel_frame", [&](io::Json& w) {
      Frame frame0{};
      for (std::size_t a = 0; a < 4; ++a) {
        frame0[a][a] = 1.0;
      }
      FrameTrajectory frame = parallel_transport(sys, run.trajectory, frame0);
      std::vector<double> comp = monitor(sys, run.trajectory, CurvatureComponentMonitor{law.indices}, &frame);
      double worst = 0;
      for (std::size_t s = 0; s < comp.size(); ++s) {
        double expect = law.coefficient * std::expm1(law.rate * run.trajectory.samples[s].x[2]);
        worst = std::max(worst, std::abs(comp[s] - expect) / std::max(1.0, std::abs(expect)));
      }
      double gram = gram_drift(sys, run.trajectory, frame);
      double peak = max_abs(comp);
      w["component"] = monitor_name(CurvatureComponentMonitor{law.indices});
      w["max_rel_deviation_from_law"] = worst;
      w["max_abs_component"] = peak;
      w["gram_drift"] = gram;
      return worst <= law.tol && peak > 1e4 && gram <= 1e-9;
    }));
  }
}

inline ClauseResult completeness_clause(const CatalogEntry& e, const std::vector<MetricInstance>& inst,
                                        const VerificationBudget& b, CounterRng& rng) {
  return run_clause("completeness", [&](io::Json& w) {
    int completed = 0;
    double drift = 0, affine = 0, reference = 0;
    IntegrationOptions o;
    o.horizon = e.completeness_horizon;
    o.max_steps = b.max_steps;
    int starts = std::max(b.complete_starts, static_cast<int>(inst.size()));
    io::Json failures = io::Json::array();
    for (int i = 0; i < starts; ++i) {
      const MetricInstance& mi = inst[static_cast<std::size_t>(i) % inst.size()];
      GeodesicSystem sys(mi.field);
      GeodesicState s0 = e.random_start(rng);
      GeodesicRun r = integrate_geodesic(sys, s0, o);
      double d = energy_drift(r.trajectory);
      drift = std::max(drift, d);
      if (r.outcome.completed() && d < 1e-7) {
        ++completed;
      } else {
        failures.push_back(io::Json{{"x", io::to_json(s0.x)}, {"v", io::to_json(s0.v)},
                                    {"outcome", io::to_json(r.outcome)}, {"energy_drift", d}});
      }
      if (mi.metric.is_strict()) {
        for (const auto& s : r.trajectory.samples) {
          affine = std::max({affine, std::abs(s.x[2] - s0.x[2] - s0.v[2] * (s.t - s0.t)),
                             std::abs(s.x[3] - s0.x[3] - s0.v[3] * (s.t - s0.t))});
        }
        if (i < static_cast<int>(inst.size())) {
          IntegrationOptions o100 = o;
          o100.horizon = 100;
          GeodesicState a = integrate_geodesic(sys, s0, o100).trajectory.samples.back();
          GeodesicState q = strict_geodesic_reference(mi.metric, s0, 100).samples.back();
          for (std::size_t c = 0; c < 4; ++c) {
            reference = std::max(reference, std::abs(a.x[c] - q.x[c]));
          }
        }
      }
    }
    w["horizon"] = o.horizon;
    w["starts"] = starts;
    w["completed"] = completed;
    w["max_energy_drift"] = drift;
    w["failures"] = failures;
    w["evidence"] = "finite-horizon numerical evidence, not a proof of completeness";
    bool ok = completed == starts;
    if (e.randomized_strict) {
      w["max_affine_deviation_x3_x4"] = affine;
      w["max_reference_deviation_t100"] = reference;
      ok = ok && affine <= 1e-8 && reference <= 1e-7;
    }
    return ok;
  });
}

} // namespace detail

/**
 * @brief Replays one catalog entry's claims: spectrum scan, min-poly regions, the
 * diagonalizability locus, and the completeness or blowup protocol.
 *
 * Randomness comes only from `rng`; clause order is fixed.
 */
inline EntryReport verify_entry(const CatalogEntry& e, const VerificationBudget& b, CounterRng rng,
                                ClauseSelection which = {}) {
  EntryReport rep;
  rep.id = e.id;
  rep.notes = e.notes;
  std::vector<detail::MetricInstance> inst;
  if (e.randomized_strict) {
    for (int i = 0; i < std::max(1, b.strict_metrics); ++i) {
      CounterRng mrng = rng.split(1000 + static_cast<std::uint64_t>(i));
      inst.emplace_back(random_strict_metric(mrng));
    }
  } else {
    inst.emplace_back(e.metric);
  }
  CounterRng spec_rng = rng.split(1), poly_rng = rng.split(2), locus_rng = rng.split(3), dyn_rng = rng.split(4);
  if (which.spectral) {
    rep.clauses.push_back(detail::spectrum_clause(e, inst, b, spec_rng));
    if (!e.min_poly_rules.empty()) {
      rep.clauses.push_back(detail::min_poly_clause(e, inst, b, poly_rng));
    }
    if (e.diag_locus) {
      rep.clauses.push_back(detail::locus_clause(e, inst.front(), b, locus_rng));
    }
  }
  if (which.dynamics) {
    if (e.completeness == Completeness::complete) {
      rep.clauses.push_back(detail::completeness_clause(e, inst, b, dyn_rng));
    } else if (e.witness) {
      detail::witness_clauses(e, inst.front(), b, rep.clauses);
    }
  }
  return rep;
}

/// Entries and clause groups for a suite name: all | thm31 | thm51 | thm61 | thm63.
inline std::pair<std::vector<CatalogEntry>, ClauseSelection> suite_selection(const std::string& suite) {
  std::vector<CatalogEntry> all = catalog_entries();
  std::vector<CatalogEntry> picked;
  ClauseSelection which;
  if (suite == "all") {
    return {all, which};
  }
  std::string group = suite;
  if (suite == "thm61") {
    which.dynamics = false;
  } else if (suite == "thm63") {
    which.spectral = false;
    group = "thm61";
  } else if (suite != "thm31" && suite != "thm51") {
    throw InvalidOptions("unknown suite: " + suite);
  }
  std::copy_if(all.begin(), all.end(), std::back_inserter(picked),
               [&group](const CatalogEntry& e) { return e.suite == group; });
  return {picked, which};
}

/// Verifies a suite, entries in parallel; the report is ordered by entry id.
inline VerificationReport verify_suite(const std::string& suite, std::uint64_t seed, const VerificationBudget& b = {}) {
  auto [entries, which] = suite_selection(suite);
  CounterRng root(seed);
  std::vector<std::future<EntryReport>> jobs;
  jobs.reserve(entries.size());
  for (const CatalogEntry& e : entries) {
    CounterRng rng = root.split(detail::fnv1a(e.id));
    jobs.push_back(std::async(std::launch::async, [&e, &b, rng, which = which]() { return verify_entry(e, b, rng, which); }));
  }
  VerificationReport report;
  report.suite = suite;
  report.seed = seed;
  for (auto& j : jobs) {
    report.entries.push_back(j.get());
  }
  return report;
}

namespace io {

inline Json to_json(const EntryReport& r) {
  Json clauses = Json::array();
  for (const auto& c : r.clauses) {
    clauses.push_back(Json{{"name", c.name}, {"status", walker::to_string(c.status)}, {"witness", c.witness}});
  }
  return Json{{"id", r.id}, {"pass", r.passed()}, {"clauses", clauses}, {"notes", r.notes}};
}

inline Json to_json(const VerificationReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back(to_json(e));
  }
  return Json{{"suite", r.suite}, {"seed", r.seed}, {"pass", r.passed()}, {"entries", entries}};
}

} // namespace io

} // namespace walker
