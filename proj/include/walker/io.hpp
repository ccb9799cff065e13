#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "walker/curvature.hpp"
#include "walker/errors.hpp"
#include "walker/geodesic.hpp"
#include "walker/metric.hpp"
#include "walker/parse.hpp"
#include "walker/spectral.hpp"

namespace walker::io {

using Json = nlohmann::ordered_json;

inline Json to_json(const Rational& r) { return r.str(); }

// signed zeros print as 0
inline Json to_json(const Complex& z) { return Json::array({z.real() + 0.0, z.imag() + 0.0}); }

inline Json to_json(const std::vector<Complex>& zs) {
  Json out = Json::array();
  for (const auto& z : zs) {
    out.push_back(to_json(z));
  }
  return out;
}

/// Ascending coefficients as "p/q" strings.
inline Json to_json(const UPoly& p) {
  Json out = Json::array();
  for (const auto& c : p.coeffs()) {
    out.push_back(c.str());
  }
  return out;
}

template <typename T>
Json to_json(const Point4<T>& p) {
  Json out = Json::array();
  for (const auto& v : p) {
    if constexpr (std::is_same_v<T, Rational>) {
      out.push_back(v.str());
    } else {
      out.push_back(v);
    }
  }
  return out;
}

inline Json to_json(const Mat4<Rational>& m) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& v : row) {
      r.push_back(v.str());
    }
    out.push_back(r);
  }
  return out;
}

inline Json to_json(const SymMatrix4<Rational>& m) { return to_json(m.dense()); }

/// Nonzero components only, keyed by 1-based index strings such as "1331".
inline Json sparse_json(const Tensor4<Rational>& t) {
  Json out = Json::object();
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t l = 0; l < 4; ++l) {
          if (!t[i][j][k][l].is_zero()) {
            std::string key = std::to_string(i + 1) + std::to_string(j + 1) + std::to_string(k + 1) +
                              std::to_string(l + 1);
            out[key] = t[i][j][k][l].str();
          }
        }
      }
    }
  }
  return out;
}

inline Json sparse_json(const Christoffel<Rational>& c) {
  Json out = Json::object();
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i; j < 4; ++j) {
        if (!c[k][i][j].is_zero()) {
          out[std::to_string(k + 1) + std::to_string(i + 1) + std::to_string(j + 1)] = c[k][i][j].str();
        }
      }
    }
  }
  return out;
}

inline Json to_json(const WalkerMetric& m) {
  Json params = Json::object();
  for (const auto& [name, value] : m.parameters) {
    params[name] = value.str();
  }
  return Json{{"label", m.label},
              {"parameters", params},
              {"psi33", m.psi33.render()},
              {"psi34", m.psi34.render()},
              {"psi44", m.psi44.render()}};
}

/// Christoffel symbols keyed "kij" (Gamma^k_ij, i <= j); curvature keyed "ijkl".
inline Json to_json(const CurvatureReport<Rational>& r) {
  return Json{{"point", to_json(r.point)},
              {"metric", to_json(r.g)},
              {"inverse_metric", to_json(r.g_inverse)},
              {"christoffel", sparse_json(r.christoffel)},
              {"riemann", sparse_json(r.riemann)},
              {"ricci", to_json(r.ricci)},
              {"scalar", r.scalar.str()},
              {"weyl", sparse_json(r.weyl)}};
}

inline Json to_json(const SpectralReport& s) {
  Json out{{"char_poly", to_json(s.char_poly)},
           {"min_poly", to_json(s.min_poly)},
           {"eigenvalues", to_json(s.eigenvalues)},
           {"diagonalizable", s.diagonalizable}};
  out["nilpotency_index"] = s.nilpotency_index ? Json(*s.nilpotency_index) : Json(nullptr);
  return out;
}

inline Json to_json(const ClassScan& c) {
  Json out{{"constant", c.constant}, {"spectrum", to_json(c.spectrum)}, {"max_min_poly_degree", c.max_min_poly_degree}};
  out["max_nilpotency_index"] = c.max_nilpotency_index ? Json(*c.max_nilpotency_index) : Json(nullptr);
  if (c.counterexample_spectra) {
    out["counterexample_spectra"] =
        Json::array({to_json(c.counterexample_spectra->first), to_json(c.counterexample_spectra->second)});
  }
  return out;
}

inline Json to_json(const OssermanScan& s) {
  return Json{{"constant", s.constant},
              {"spectrum", to_json(s.spectrum)},
              {"classes_agree", s.classes_agree},
              {"spacelike", to_json(s.spacelike)},
              {"timelike", to_json(s.timelike)}};
}

inline Json to_json(const IntegrationOutcome& o) {
  Json out{{"verdict", o.verdict_name()}};
  if (const auto* b = std::get_if<Blowup>(&o.verdict)) {
    out["t_star"] = b->t_star;
    out["t_star_uncertainty"] = b->t_star_uncertainty;
    out["diverging_quantity"] = b->diverging_quantity;
  } else {
    out["t_star"] = nullptr;
    out["t_star_uncertainty"] = nullptr;
  }
  if (const auto* c = std::get_if<Completed>(&o.verdict)) {
    out["t_final"] = c->t;
  }
  if (const auto* x = std::get_if<BudgetExhausted>(&o.verdict)) {
    out["reason"] = x->reason;
  }
  out["stats"] = Json{{"steps", o.stats.steps}, {"rejected", o.stats.rejected}, {"min_step", o.stats.min_step}};
  return out;
}

/// 17 significant digits, enough to round-trip a double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV with header t,x1..x4,v1..v4 followed by every monitor series (name order).
inline void write_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x1,x2,x3,x4,v1,v2,v3,v4";
  for (const auto& [name, series] : traj.monitors) {
    os << ',' << name;
  }
  os << '\n';
  for (std::size_t s = 0; s < traj.samples.size(); ++s) {
    const GeodesicState& st = traj.samples[s];
    os << format_double(st.t);
    for (double v : st.x) {
      os << ',' << format_double(v);
    }
    for (double v : st.v) {
      os << ',' << format_double(v);
    }
    for (const auto& [name, series] : traj.monitors) {
      os << ',' << format_double(series.at(s));
    }
    os << '\n';
  }
}

/// Metric from `{"label", "parameters": {name: "p/q"}, "psi33", "psi34", "psi44"}`.
inline WalkerMetric metric_from_json(const nlohmann::json& j) {
  try {
    ParameterMap params;
    if (j.contains("parameters")) {
      for (const auto& [name, value] : j.at("parameters").items()) {
        params.emplace(name, value.is_string() ? Rational::parse(value.get<std::string>())
                                               : Rational(value.get<long>()));
      }
    }
    std::string label = j.value("label", std::string("metric"));
    return make_metric(label, j.at("psi33").get<std::string>(), j.at("psi34").get<std::string>(),
                       j.at("psi44").get<std::string>(), params);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidOptions(std::string("metric file: ") + e.what());
  }
}

inline WalkerMetric load_metric_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidOptions("cannot open metric file: " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidOptions("metric file " + path + ": " + e.what());
  }
  return metric_from_json(j);
}

} // namespace walker::io
