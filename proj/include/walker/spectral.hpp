#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <optional>
#include <vector>

#include "walker/curvature.hpp"
#include "walker/errors.hpp"
#include "walker/matrix.hpp"
#include "walker/rational.hpp"
#include "walker/rng.hpp"
#include "walker/upoly.hpp"

namespace walker {

using Complex = std::complex<double>;

/// Characteristic polynomial det(lambda I - A) by Faddeev-LeVerrier, exact.
inline UPoly char_poly(const Mat4<Rational>& a) {
  std::vector<Rational> c(5, Rational(0));
  c[4] = Rational(1);
  Mat4<Rational> m = zero_mat4<Rational>();
  for (std::size_t k = 1; k <= 4; ++k) {
    Mat4<Rational> next = a * m;
    for (std::size_t d = 0; d < 4; ++d) {
      next[d][d] += c[4 - k + 1];
    }
    m = next;
    Mat4<Rational> am = a * m;
    c[4 - k] = -trace(am) / Rational(static_cast<long>(k));
  }
  return UPoly(std::move(c));
}

/// Floating-point Faddeev-LeVerrier; coefficients ascending, leading 1.
inline std::array<double, 5> char_poly(const Mat4<double>& a) {
  std::array<double, 5> c{0, 0, 0, 0, 1};
  Mat4<double> m = zero_mat4<double>();
  for (std::size_t k = 1; k <= 4; ++k) {
    Mat4<double> next = a * m;
    for (std::size_t d = 0; d < 4; ++d) {
      next[d][d] += c[4 - k + 1];
    }
    m = next;
    c[4 - k] = -trace(a * m) / static_cast<double>(k);
  }
  return c;
}

/**
 * @brief Minimal polynomial: the first power A^d that is a rational combination of
 * I, A, ..., A^{d-1}, found by exact elimination on the power stack viewed as 16-vectors.
 */
inline UPoly min_poly(const Mat4<Rational>& a) {
  std::vector<std::array<Rational, 16>> powers;
  Mat4<Rational> p = identity_mat4<Rational>();
  auto flat = [](const Mat4<Rational>& m) {
    std::array<Rational, 16> v;
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        v[4 * i + j] = m[i][j];
      }
    }
    return v;
  };
  powers.push_back(flat(p));
  for (std::size_t d = 1; d <= 4; ++d) {
    p = p * a;
    std::array<Rational, 16> target = flat(p);
    // Solve sum_{i<d} x_i powers[i] = target by Gaussian elimination on a 16 x (d+1) system.
    std::vector<std::vector<Rational>> rows(16, std::vector<Rational>(d + 1));
    for (std::size_t r = 0; r < 16; ++r) {
      for (std::size_t i = 0; i < d; ++i) {
        rows[r][i] = powers[i][r];
      }
      rows[r][d] = target[r];
    }
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;
    for (std::size_t col = 0; col < d && rank < 16; ++col) {
      std::size_t piv = rank;
      while (piv < 16 && rows[piv][col].is_zero()) {
        ++piv;
      }
      if (piv == 16) {
        continue;
      }
      std::swap(rows[piv], rows[rank]);
      Rational inv = Rational(1) / rows[rank][col];
      for (auto& v : rows[rank]) {
        v *= inv;
      }
      for (std::size_t r = 0; r < 16; ++r) {
        if (r == rank || rows[r][col].is_zero()) {
          continue;
        }
        Rational f = rows[r][col];
        for (std::size_t j = col; j <= d; ++j) {
          rows[r][j] -= f * rows[rank][j];
        }
      }
      pivot_cols.push_back(col);
      ++rank;
    }
    bool consistent = true;
    for (std::size_t r = rank; r < 16; ++r) {
      if (!rows[r][d].is_zero()) {
        consistent = false;
        break;
      }
    }
    if (consistent) {
      std::vector<Rational> coeffs(d + 1, Rational(0));
      coeffs[d] = Rational(1);
      for (std::size_t r = 0; r < rank; ++r) {
        coeffs[pivot_cols[r]] = -rows[r][d];
      }
      return UPoly(std::move(coeffs));
    }
    powers.push_back(target);
  }
  // Cayley-Hamilton guarantees termination by degree 4.
  throw Error("minimal polynomial search failed");
}

/// Diagonalizable over C iff the minimal polynomial is square-free.
inline bool is_diagonalizable(const Mat4<Rational>& a) {
  UPoly m = min_poly(a);
  return gcd(m, m.derivative()).degree() == 0;
}

/// d when the minimal polynomial is lambda^d, otherwise nullopt.
inline std::optional<int> nilpotency_index(const UPoly& minimal) {
  if (minimal == UPoly::power(static_cast<std::size_t>(minimal.degree()))) {
    return minimal.degree();
  }
  return std::nullopt;
}

namespace detail {

inline std::vector<Complex> polish_roots(const std::vector<long double>& coeffs, std::vector<Complex> roots) {
  using C = std::complex<long double>;
  for (auto& r : roots) {
    C z(r.real(), r.imag());
    for (int it = 0; it < 8; ++it) {
      C p(0), dp(0);
      for (std::size_t i = coeffs.size(); i-- > 0;) {
        dp = dp * z + p;
        p = p * z + C(coeffs[i]);
      }
      if (std::abs(dp) == 0.0L) {
        break;
      }
      C step = p / dp;
      z -= step;
      if (std::abs(step) <= 1e-19L * std::max(1.0L, std::abs(z))) {
        break;
      }
    }
    r = Complex(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
  return roots;
}

// Roots of a polynomial with (assumed) simple roots; coefficients ascending, nonzero leading.
inline std::vector<Complex> simple_roots(const std::vector<long double>& coeffs) {
  const std::size_t n = coeffs.size() - 1;
  std::vector<Complex> roots;
  if (n == 0) {
    return roots;
  }
  const long double lead = coeffs[n];
  if (n == 1) {
    roots.emplace_back(static_cast<double>(-coeffs[0] / lead), 0.0);
    return roots;
  }
  if (n == 2) {
    long double b = coeffs[1] / lead;
    long double c = coeffs[0] / lead;
    long double disc = b * b - 4 * c;
    if (disc >= 0) {
      long double q = -0.5L * (b + std::copysign(std::sqrt(disc), b));
      long double r1 = q;
      long double r2 = q != 0 ? c / q : 0.0L;
      roots.emplace_back(static_cast<double>(r1), 0.0);
      roots.emplace_back(static_cast<double>(r2), 0.0);
    } else {
      long double re = -b / 2;
      long double im = std::sqrt(-disc) / 2;
      roots.emplace_back(static_cast<double>(re), static_cast<double>(im));
      roots.emplace_back(static_cast<double>(re), static_cast<double>(-im));
    }
    return polish_roots(coeffs, roots);
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i < n; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) =
        static_cast<double>(-coeffs[i] / lead);
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    roots.push_back(solver.eigenvalues()[i]);
  }
  return polish_roots(coeffs, roots);
}

// Real-coefficient input: snap tiny imaginary parts and force exact conjugate pairs.
inline void tidy_conjugates(std::vector<Complex>& roots) {
  for (auto& r : roots) {
    if (std::abs(r.imag()) <= 1e-13 * std::max(1.0, std::abs(r))) {
      r = Complex(r.real(), 0.0);
    }
  }
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i] || roots[i].imag() <= 0.0) {
      continue;
    }
    std::size_t best = roots.size();
    double best_d = 0.0;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j == i || used[j] || roots[j].imag() >= 0.0) {
        continue;
      }
      double d = std::abs(roots[j] - std::conj(roots[i]));
      if (best == roots.size() || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    if (best != roots.size()) {
      Complex avg = 0.5 * (roots[i] + std::conj(roots[best]));
      roots[i] = avg;
      roots[best] = std::conj(avg);
      used[i] = used[best] = true;
    }
  }
}

} // namespace detail

/// Orders a multiset by modulus, then argument.
inline void sort_spectrum(std::vector<Complex>& s) {
  std::sort(s.begin(), s.end(), [](const Complex& a, const Complex& b) {
    double ma = std::abs(a);
    double mb = std::abs(b);
    if (ma != mb) {
      return ma < mb;
    }
    return std::arg(a) < std::arg(b);
  });
}

/**
 * @brief All four roots, with multiplicity, of an exact monic quartic.
 *
 * Repeated roots are separated exactly by square-free decomposition first, so each
 * numeric root solve sees only simple roots.
 */
inline std::vector<Complex> eigenvalues(const UPoly& char_poly) {
  std::vector<Complex> out;
  for (const auto& [factor, mult] : squarefree_decomposition(char_poly)) {
    std::vector<long double> c;
    c.reserve(factor.coeffs().size());
    for (const auto& v : factor.coeffs()) {
      c.push_back(static_cast<long double>(v.to_double()));
    }
    if (factor.degree() == 1) {
      // exact root, no rounding beyond the final conversion
      Rational root = -factor.coeff(0) / factor.coeff(1);
      for (int m = 0; m < mult; ++m) {
        out.emplace_back(root.to_double(), 0.0);
      }
      continue;
    }
    auto roots = detail::simple_roots(c);
    for (int m = 0; m < mult; ++m) {
      out.insert(out.end(), roots.begin(), roots.end());
    }
  }
  detail::tidy_conjugates(out);
  sort_spectrum(out);
  return out;
}

/// Roots of a floating monic quartic (ascending coefficients) via the companion matrix.
inline std::vector<Complex> eigenvalues(const std::array<double, 5>& char_poly) {
  std::vector<long double> c(char_poly.begin(), char_poly.end());
  auto out = detail::simple_roots(c);
  detail::tidy_conjugates(out);
  sort_spectrum(out);
  return out;
}

/**
 * @brief Multiset equality within tol: the best of all pairings of the two lists.
 *
 * Sorting alone is fragile when two values share a modulus (e.g. +1/2 and -1/2).
 */
inline bool spectra_match(std::vector<Complex> a, std::vector<Complex> b, double tol) {
  if (a.size() != b.size()) {
    return false;
  }
  std::vector<std::size_t> perm(b.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < a.size() && ok; ++i) {
      ok = std::abs(a[i] - b[perm[i]]) <= tol;
    }
    if (ok) {
      return true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

/// Characteristic and minimal polynomial, spectrum and Jordan data of one operator.
struct SpectralReport {
  UPoly char_poly;
  UPoly min_poly;
  std::vector<Complex> eigenvalues;
  bool diagonalizable = false;
  std::optional<int> nilpotency_index;
};

inline SpectralReport spectral_report(const Mat4<Rational>& a) {
  SpectralReport r;
  r.char_poly = char_poly(a);
  r.min_poly = min_poly(a);
  r.eigenvalues = eigenvalues(r.char_poly);
  r.diagonalizable = gcd(r.min_poly, r.min_poly.derivative()).degree() == 0;
  r.nilpotency_index = nilpotency_index(r.min_poly);
  return r;
}

/**
 * @brief A unit tangent vector: g(v,v) = causal_sign.
 *
 * `direction` is the exact rational vector it was scaled from and `norm_sq` = g(direction,
 * direction), so exact operators of the unit vector are available as A(direction) / |norm_sq|
 * for any operator quadratic in its defining vector.
 */
struct UnitVector {
  Vec4<double> components;
  int causal_sign = 1;
  Vec4<Rational> direction;
  Rational norm_sq;
};

/// Accepts v when |g(v,v)| > 1e-3 with the requested sign, and scales it to unit length.
inline std::optional<UnitVector> try_unit_vector(const SymMatrix4<Rational>& g, const Vec4<Rational>& v, int sign) {
  Rational n = inner(g, v, v);
  if (n.sign() != sign || abs(n) <= Rational(1, 1000)) {
    return std::nullopt;
  }
  UnitVector u;
  u.causal_sign = sign;
  u.direction = v;
  u.norm_sq = n;
  double scale = 1.0 / std::sqrt(std::abs(n.to_double()));
  for (std::size_t i = 0; i < 4; ++i) {
    u.components[i] = v[i].to_double() * scale;
  }
  return u;
}

/**
 * @brief Rejection-samples a unit spacelike (+1) or timelike (-1) vector at a point.
 *
 * Candidates have components (k/256)·2^j with k uniform in [-256, 256] and j uniform in
 * [-10, 10], so both causal classes are reachable even when |psi| is large at the point.
 * Deterministic in the generator state; throws SamplingBudgetExhausted after 10000 rejections.
 */
inline UnitVector sample_unit_vector(const SymMatrix4<Rational>& g, int sign, CounterRng& rng) {
  if (sign != 1 && sign != -1) {
    throw InvalidOptions("causal sign must be +1 or -1");
  }
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Vec4<Rational> v;
    for (auto& c : v) {
      c = Rational(static_cast<long>(rng.uniform_int(-256, 256)), 256);
      long j = static_cast<long>(rng.uniform_int(-10, 10));
      c = j >= 0 ? c * Rational(1L << j) : c / Rational(1L << -j);
    }
    if (auto u = try_unit_vector(g, v, sign)) {
      return *u;
    }
  }
  throw SamplingBudgetExhausted();
}

/// Exact operator of the unit vector u from the operator of its rational direction.
inline Mat4<Rational> unit_normalized(const Mat4<Rational>& op_of_direction, const UnitVector& u) {
  return scaled(Rational(1) / abs(u.norm_sq), op_of_direction);
}

enum class OperatorKind { jacobi, conformal };

/// Outcome of sampling one causal class.
struct ClassScan {
  bool constant = true;
  std::vector<Complex> spectrum;              // common spectrum (first sample)
  std::optional<std::pair<UnitVector, UnitVector>> counterexample;
  std::optional<std::pair<std::vector<Complex>, std::vector<Complex>>> counterexample_spectra;
  std::optional<int> max_nilpotency_index;    // set when every sample is nilpotent
  int max_min_poly_degree = 0;
};

struct OssermanScan {
  bool constant = false; // both classes constant
  std::vector<Complex> spectrum; // spacelike common spectrum
  ClassScan spacelike;
  ClassScan timelike;
  bool classes_agree = false; // spacelike spectrum equals timelike spectrum
};

namespace detail {
inline ClassScan scan_class(const CurvatureReport<Rational>& rep, OperatorKind kind, int sign, int n, double tol,
                            CounterRng& rng) {
  ClassScan out;
  bool all_nilpotent = true;
  int max_nil = 0;
  std::optional<UnitVector> first_vec;
  for (int s = 0; s < n; ++s) {
    UnitVector u = sample_unit_vector(rep.g, sign, rng);
    Mat4<Rational> op = kind == OperatorKind::jacobi ? jacobi_operator(rep, u.direction).matrix
                                                     : conformal_jacobi_operator(rep, u.direction).matrix;
    op = unit_normalized(op, u);
    SpectralReport sr = spectral_report(op);
    out.max_min_poly_degree = std::max(out.max_min_poly_degree, sr.min_poly.degree());
    if (sr.nilpotency_index) {
      max_nil = std::max(max_nil, *sr.nilpotency_index);
    } else {
      all_nilpotent = false;
    }
    if (!first_vec) {
      first_vec = u;
      out.spectrum = sr.eigenvalues;
      continue;
    }
    if (out.constant && !spectra_match(out.spectrum, sr.eigenvalues, tol)) {
      out.constant = false;
      out.counterexample = std::make_pair(*first_vec, u);
      out.counterexample_spectra = std::make_pair(out.spectrum, sr.eigenvalues);
    }
  }
  if (all_nilpotent) {
    out.max_nilpotency_index = max_nil;
  }
  return out;
}
} // namespace detail

/**
 * @brief Samples n unit spacelike and n unit timelike vectors at the report's point and
 * checks that the spectrum of the (conformal) Jacobi operator is constant on each class.
 *
 * Operators are exact; spectra are compared within tol. Cross-class agreement is
 * reported but does not enter `constant`.
 */
inline OssermanScan osserman_scan(const CurvatureReport<Rational>& rep, OperatorKind kind, int n, double tol,
                                  CounterRng& rng) {
  if (n < 2) {
    throw InvalidOptions("osserman_scan needs at least 2 samples per class");
  }
  OssermanScan out;
  out.spacelike = detail::scan_class(rep, kind, +1, n, tol, rng);
  out.timelike = detail::scan_class(rep, kind, -1, n, tol, rng);
  out.constant = out.spacelike.constant && out.timelike.constant;
  out.spectrum = out.spacelike.spectrum;
  out.classes_agree = spectra_match(out.spacelike.spectrum, out.timelike.spectrum, tol);
  return out;
}

inline OssermanScan osserman_scan(const CurvatureField& field, const Point4<Rational>& p, OperatorKind kind, int n,
                                  double tol, CounterRng& rng) {
  return osserman_scan(curvature_report(field, p), kind, n, tol, rng);
}

} // namespace walker
