// walkerlab: curvature, spectra, geodesics and catalog verification for Walker metrics.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 internal error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "walker/catalog.hpp"
#include "walker/io.hpp"
#include "walker/verify.hpp"

namespace {

using namespace walker;

constexpr std::uint64_t kDefaultSeed = 20240601;

enum Exit { ok = 0, verification_failed = 1, usage = 2, internal = 3 };

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string metric_file;
  std::string catalog_id;
  std::string point;
  std::string x0;
  std::string v0;
  double horizon = 10.0;
  double rtol = IntegrationOptions{}.rtol;
  double atol = IntegrationOptions{}.atol;
  int samples = 8;
  double tol = 1e-8;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string format;
  std::string suite = "all";
};

std::vector<Rational> parse_tuple(const std::string& text, const char* flag) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(Rational::parse(item));
    } catch (const Error& e) {
      throw UsageError(std::string(flag) + ": " + e.what());
    }
  }
  if (out.size() != 4) {
    throw UsageError(std::string(flag) + " needs four comma-separated values, got \"" + text + "\"");
  }
  return out;
}

Point4<Rational> exact_point(const std::string& text, const char* flag) {
  std::vector<Rational> v = parse_tuple(text, flag);
  return {v[0], v[1], v[2], v[3]};
}

Point4<double> float_point(const std::string& text, const char* flag) {
  std::vector<Rational> v = parse_tuple(text, flag);
  return {v[0].to_double(), v[1].to_double(), v[2].to_double(), v[3].to_double()};
}

struct Source {
  WalkerMetric metric;
  std::optional<CatalogEntry> entry;
};

Source load_source(const Config& c) {
  if (c.metric_file.empty() == c.catalog_id.empty()) {
    throw UsageError("exactly one of --metric or --catalog is required");
  }
  if (!c.metric_file.empty()) {
    try {
      return {io::load_metric_file(c.metric_file), std::nullopt};
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  const CatalogEntry& e = catalog_entry(c.catalog_id);
  return {e.metric, e};
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) {
    throw UsageError("cannot write " + c.out);
  }
  f << text;
}

void require_format(const Config& c, std::initializer_list<const char*> allowed) {
  if (c.format.empty()) {
    return;
  }
  for (const char* a : allowed) {
    if (c.format == a) {
      return;
    }
  }
  throw UsageError("--format " + c.format + " is not available for this command");
}

int run_analyze(const Config& c) {
  require_format(c, {"json"});
  if (c.point.empty()) {
    throw UsageError("analyze requires --point");
  }
  Source s = load_source(c);
  io::Json j{{"metric", io::to_json(s.metric)}};
  j["curvature"] = io::to_json(curvature_report(s.metric, exact_point(c.point, "--point")));
  emit(c, j.dump(2) + "\n");
  return ok;
}

int run_spectrum(const Config& c) {
  require_format(c, {"json"});
  if (c.point.empty()) {
    throw UsageError("spectrum requires --point");
  }
  if (c.samples <= 0 || !(c.tol > 0)) {
    throw UsageError("--samples and --tol must be positive");
  }
  Source s = load_source(c);
  OperatorKind kind = s.entry ? s.entry->kind : OperatorKind::jacobi;
  Point4<Rational> p = exact_point(c.point, "--point");
  CurvatureReport<Rational> rep = curvature_report(s.metric, p);
  CounterRng rng(c.seed);
  io::Json reports = io::Json::array();
  for (int sign : {1, -1}) {
    for (int k = 0; k < c.samples; ++k) {
      UnitVector u = sample_unit_vector(rep.g, sign, rng);
      Mat4<Rational> op = kind == OperatorKind::jacobi ? jacobi_operator(rep, u.direction).matrix
                                                       : conformal_jacobi_operator(rep, u.direction).matrix;
      reports.push_back(io::Json{{"causal_sign", sign},
                                 {"direction", io::to_json(u.direction)},
                                 {"report", io::to_json(spectral_report(unit_normalized(op, u)))}});
    }
  }
  io::Json j{{"metric", io::to_json(s.metric)},
             {"point", io::to_json(p)},
             {"operator", kind == OperatorKind::jacobi ? "jacobi" : "conformal_jacobi"},
             {"seed", c.seed},
             {"reports", reports},
             {"scan", io::to_json(osserman_scan(rep, kind, c.samples, c.tol, rng))}};
  if (s.entry) {
    try {
      j["expected_spectrum"] = io::to_json(expected_spectrum(*s.entry, p));
    } catch (const NoRuleForEntry&) {
    }
  }
  emit(c, j.dump(2) + "\n");
  return ok;
}

int run_geodesic(const Config& c) {
  require_format(c, {"json", "csv"});
  Source s = load_source(c);
  GeodesicState s0;
  if (!c.x0.empty() && !c.v0.empty()) {
    s0 = {0.0, float_point(c.x0, "--x0"), float_point(c.v0, "--v0")};
  } else if (c.x0.empty() && c.v0.empty() && s.entry && s.entry->witness) {
    s0 = s.entry->witness->start;
  } else {
    throw UsageError("geodesic requires --x0 and --v0 (optional only for catalog entries with a witness)");
  }
  IntegrationOptions o;
  o.horizon = c.horizon;
  o.rtol = c.rtol;
  o.atol = c.atol;
  o.validate(s0.t);
  CurvatureField field(s.metric);
  GeodesicSystem sys(field);
  GeodesicRun run = integrate_geodesic(sys, s0, o);
  run.trajectory.monitors["ricci"] = monitor(sys, run.trajectory, RicciMonitor{});

  io::Json j{{"metric", io::to_json(s.metric)},
             {"start", io::Json{{"x", io::to_json(s0.x)}, {"v", io::to_json(s0.v)}}},
             {"options", io::Json{{"horizon", o.horizon}, {"rtol", o.rtol}, {"atol", o.atol}}},
             {"samples", run.trajectory.samples.size()},
             {"energy_drift", energy_drift(run.trajectory)},
             {"outcome", io::to_json(run.outcome)}};
  if (c.format == "csv") {
    std::ostringstream csv;
    io::write_csv(csv, run.trajectory);
    emit(c, csv.str());
    if (!c.out.empty()) {
      std::cout << j.dump(2) << "\n";
    }
  } else {
    emit(c, j.dump(2) + "\n");
  }
  return ok;
}

int run_verify(const Config& c) {
  require_format(c, {"json"});
  VerificationReport r = verify_suite(c.suite, c.seed);
  emit(c, io::to_json(r).dump(2) + "\n");
  if (!c.out.empty()) {
    for (const EntryReport& e : r.entries) {
      std::cout << (e.passed() ? "pass " : "FAIL ") << e.id << "\n";
    }
  }
  return r.passed() ? ok : verification_failed;
}

int run_list(const Config& c) {
  require_format(c, {"json"});
  std::ostringstream os;
  if (c.format == "json") {
    io::Json j = io::Json::array();
    for (const CatalogEntry& e : catalog_entries()) {
      j.push_back(io::Json{{"id", e.id}, {"suite", e.suite}, {"description", e.description}});
    }
    os << j.dump(2) << "\n";
  } else {
    for (const CatalogEntry& e : catalog_entries()) {
      os << e.id << "  " << e.description << "\n";
    }
  }
  emit(c, os.str());
  return ok;
}

void add_source(CLI::App* sub, Config& c) {
  auto* m = sub->add_option("--metric", c.metric_file, "Metric JSON file {label, parameters, psi33, psi34, psi44}");
  auto* k = sub->add_option("--catalog", c.catalog_id, "Catalog entry id (see `list`)");
  m->excludes(k);
  k->excludes(m);
}

void add_output(CLI::App* sub, Config& c, const std::string& formats) {
  sub->add_option("--out", c.out, "Write the artifact to FILE instead of stdout");
  sub->add_option("--format", c.format, "Output format: " + formats);
}

} // namespace

int main(int argc, char** argv) {
  Config c;
  CLI::App app{"walkerlab: exact curvature, spectra and geodesics of Walker metrics"};
  app.require_subcommand(1);
  const std::string seed_help = "Random seed (default " + std::to_string(kDefaultSeed) + ")";

  auto* analyze = app.add_subcommand("analyze", "Christoffel symbols, curvature, Ricci and Weyl at a rational point");
  add_source(analyze, c);
  analyze->add_option("--point", c.point, "Point x1,x2,x3,x4 (integers or p/q)")->required();
  add_output(analyze, c, "json");

  auto* spectrum = app.add_subcommand("spectrum", "Spectral reports and Osserman scan of the (conformal) Jacobi operator");
  add_source(spectrum, c);
  spectrum->add_option("--point", c.point, "Point x1,x2,x3,x4 (integers or p/q)")->required();
  spectrum->add_option("--samples", c.samples, "Unit vectors per causal class")->capture_default_str();
  spectrum->add_option("--tol", c.tol, "Spectrum agreement tolerance")->capture_default_str();
  spectrum->add_option("--seed", c.seed, seed_help);
  add_output(spectrum, c, "json");

  auto* geodesic = app.add_subcommand("geodesic", "Integrate a geodesic and diagnose completion or blowup");
  add_source(geodesic, c);
  geodesic->add_option("--x0", c.x0, "Initial point x1,x2,x3,x4 (default: the entry's witness)");
  geodesic->add_option("--v0", c.v0, "Initial velocity v1,v2,v3,v4 (default: the entry's witness)");
  geodesic->add_option("--horizon", c.horizon, "Final affine parameter")->capture_default_str();
  geodesic->add_option("--rtol", c.rtol, "Relative tolerance")->capture_default_str();
  geodesic->add_option("--atol", c.atol, "Absolute tolerance")->capture_default_str();
  add_output(geodesic, c, "json (outcome, default) | csv (trajectory; outcome JSON then goes to stdout when --out is set)");

  auto* verify = app.add_subcommand("verify", "Replay the catalog claims; exit 0 iff every clause passes");
  verify->add_option("--suite", c.suite, "all | thm31 | thm51 | thm61 | thm63")->capture_default_str();
  verify->add_option("--seed", c.seed, seed_help);
  add_output(verify, c, "json");

  auto* list = app.add_subcommand("list", "Catalog ids with one-line descriptions");
  add_output(list, c, "text (default) | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    if (analyze->parsed()) {
      return run_analyze(c);
    }
    if (spectrum->parsed()) {
      return run_spectrum(c);
    }
    if (geodesic->parsed()) {
      return run_geodesic(c);
    }
    if (verify->parsed()) {
      return run_verify(c);
    }
    return run_list(c);
  } catch (const UsageError& e) {
    std::cerr << "walkerlab: " << e.what() << "\n";
    return usage;
  } catch (const InvalidOptions& e) {
    std::cerr << "walkerlab: " << e.what() << "\n";
    return usage;
  } catch (const walker::ParseError& e) {
    std::cerr << "walkerlab: " << e.what() << "\n";
    return usage;
  } catch (const UnboundParameter& e) {
    std::cerr << "walkerlab: " << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "walkerlab: internal error: " << e.what() << "\n";
    return internal;
  }
}
