#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "walker/catalog.hpp"
#include "walker/curvature.hpp"
#include "walker/dense_oracle.hpp"
#include "walker/spectral.hpp"

using namespace walker;
using walker::testing::random_point;
using walker::testing::random_poly_in;
using walker::testing::random_rational;

namespace {

using P = Point4<Rational>;
using V = Vec4<Rational>;
const Complex I(0.0, 1.0);

UPoly up(std::initializer_list<Rational> ascending) { return UPoly(std::vector<Rational>(ascending)); }

Mat4<Rational> random_operator(CounterRng& rng) {
  Mat4<Rational> a;
  for (auto& row : a) {
    for (auto& v : row) {
      v = rng.uniform() < 0.3 ? Rational(0) : random_rational(rng, 5, 4);
    }
  }
  return a;
}

/// Exact unit operator of a sampled unit vector (spacelike unless sign = -1).
Mat4<Rational> unit_operator(const CurvatureReport<Rational>& rep, OperatorKind kind, CounterRng& rng,
                             int sign = 1) {
  UnitVector u = sample_unit_vector(rep.g, sign, rng);
  Mat4<Rational> op = kind == OperatorKind::jacobi ? jacobi_operator(rep, u.direction).matrix
                                                   : conformal_jacobi_operator(rep, u.direction).matrix;
  return unit_normalized(op, u);
}

/// y -> W(y, x) x built from the dense oracle's mixed Weyl components.
Mat4<Rational> dense_conformal_jacobi(const WalkerMetric& m, const P& p, const V& x) {
  dense::DenseCurvature<Rational> d = dense::compute(dense::walker_jet(m, p));
  Mat4<Rational> op = zero_mat4<Rational>();
  for (std::size_t l = 0; l < 4; ++l) {
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t k = 0; k < 4; ++k) {
          op[l][j] += d.weyl_mixed[l][j][i][k] * x[i] * x[k];
        }
      }
    }
  }
  return op;
}

WalkerMetric thm51_k1() { return catalog_entry("thm51-k1").metric; }

} // namespace

TEST(CharPoly, Examples) {
  EXPECT_EQ(char_poly(identity_mat4<Rational>()), up({1, -4, 6, -4, 1}));
  Mat4<Rational> jordan = zero_mat4<Rational>();
  jordan[0][1] = jordan[1][2] = jordan[2][3] = Rational(1);
  EXPECT_EQ(char_poly(jordan), UPoly::power(4));
  EXPECT_EQ(min_poly(jordan), UPoly::power(4));
  EXPECT_EQ(nilpotency_index(min_poly(jordan)), 4);

  CounterRng rng(21);
  CurvatureField f(thm51_k1());
  CurvatureReport<Rational> rep = curvature_report(f, P{Rational(1, 3), -2, 5, Rational(3, 2)});
  // lambda (lambda - 4) (lambda - 1)^2
  EXPECT_EQ(char_poly(unit_operator(rep, OperatorKind::jacobi, rng)), up({0, -4, 9, -6, 1}));
}

TEST(MinPoly, Examples) {
  EXPECT_EQ(min_poly(zero_mat4<Rational>()), UPoly::power(1));
  CounterRng rng(22);
  CurvatureReport<Rational> d1 = curvature_report(make_metric("1d", "0", "x1^2", "0"), P{2, -1, 3, 1});
  EXPECT_EQ(min_poly(unit_operator(d1, OperatorKind::conformal, rng)), UPoly::power(3));
  CurvatureReport<Rational> a2 = curvature_report(make_metric("2a", "0", "x2*x4^2 + x3^2*x4", "0"), P{1, 2, 3, 0});
  EXPECT_EQ(min_poly(unit_operator(a2, OperatorKind::conformal, rng)), UPoly::power(2));
}

TEST(Eigenvalues, Examples) {
  std::vector<Complex> a = eigenvalues(up({0, -4, 9, -6, 1}));
  EXPECT_TRUE(spectra_match(a, {0.0, 4.0, 1.0, 1.0}, 1e-12));
  std::vector<Complex> b = eigenvalues(up({0, 0, Rational(1, 4), 0, 1}));
  EXPECT_TRUE(spectra_match(b, {0.0, 0.0, 0.5 * I, -0.5 * I}, 1e-12));

  CounterRng rng(23);
  CurvatureReport<Rational> rep =
      curvature_report(make_metric("3a", "0", "x1^4 + x1^2 - x2^4 - x2^2", "0"), P{1, 1, 2, -3});
  SpectralReport sr = spectral_report(unit_operator(rep, OperatorKind::conformal, rng));
  EXPECT_TRUE(spectra_match(sr.eigenvalues, {0.0, 0.0, 3.5, -3.5}, 1e-9));
}

TEST(Diagonalizable, Examples) {
  EXPECT_TRUE(is_diagonalizable(identity_mat4<Rational>()));
  CounterRng rng(24);
  CurvatureField f(thm51_k1());
  CurvatureReport<Rational> on = curvature_report(f, P{3, Rational(-1, 6), 2, 1});
  EXPECT_TRUE(is_diagonalizable(unit_operator(on, OperatorKind::jacobi, rng)));
  CurvatureReport<Rational> off = curvature_report(f, P{3, 0, 2, 1});
  EXPECT_FALSE(is_diagonalizable(unit_operator(off, OperatorKind::jacobi, rng)));
}

TEST(UnitVector, Examples) {
  SymMatrix4<Rational> flat = metric_matrix(make_metric("flat", "0", "0", "0"), P{0, 0, 0, 0});
  CounterRng rng(25);
  for (int sign : {1, -1}) {
    UnitVector u = sample_unit_vector(flat, sign, rng);
    SymMatrix4<double> gd;
    gd(0, 2) = gd(1, 3) = 1.0;
    EXPECT_NEAR(inner(gd, u.components, u.components), sign, 1e-12);
    EXPECT_EQ(u.causal_sign, sign);
  }
  auto a = try_unit_vector(flat, V{1, 0, Rational(1, 2), 0}, 1);
  ASSERT_TRUE(a.has_value());
  EXPECT_EQ(a->components, (Vec4<double>{1.0, 0.0, 0.5, 0.0}));
  auto b = try_unit_vector(flat, V{-1, 0, Rational(1, 2), 0}, -1);
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->norm_sq, Rational(-1));
  EXPECT_FALSE(try_unit_vector(flat, V{1, 0, Rational(1, 2), 0}, -1).has_value());
  EXPECT_FALSE(try_unit_vector(flat, V{1, 0, Rational(1, 4000), 0}, 1).has_value());
  EXPECT_THROW(sample_unit_vector(flat, 0, rng), InvalidOptions);
}

TEST(UnitVector, SamplingIsDeterministic) {
  SymMatrix4<Rational> g = metric_matrix(thm51_k1(), P{1, 2, 3, 4});
  CounterRng a(99), b(99);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(sample_unit_vector(g, -1, a).direction, sample_unit_vector(g, -1, b).direction);
  }
}

TEST(OssermanScan, Examples) {
  CounterRng rng(26);
  OssermanScan flat = osserman_scan(CurvatureField(make_metric("flat", "0", "0", "0")), P{1, 2, 3, 4},
                                    OperatorKind::jacobi, 6, 1e-8, rng);
  EXPECT_TRUE(flat.constant);
  EXPECT_TRUE(spectra_match(flat.spectrum, {0.0, 0.0, 0.0, 0.0}, 1e-12));

  OssermanScan k1 = osserman_scan(CurvatureField(thm51_k1()), P{-1, Rational(2, 3), 4, 2}, OperatorKind::jacobi, 8,
                                  1e-8, rng);
  EXPECT_TRUE(k1.constant);
  EXPECT_TRUE(spectra_match(k1.spectrum, {0.0, 4.0, 1.0, 1.0}, 1e-8));

  OssermanScan c3 = osserman_scan(CurvatureField(make_metric("3c", "0", "x1^3 - x2^3", "0")), P{1, 1, 0, 0},
                                  OperatorKind::conformal, 8, 1e-8, rng);
  EXPECT_TRUE(c3.constant);
  EXPECT_TRUE(spectra_match(c3.spectrum, {0.0, 0.0, 1.5, -1.5}, 1e-8));
  EXPECT_THROW(osserman_scan(CurvatureField(thm51_k1()), P{0, 0, 0, 0}, OperatorKind::jacobi, 1, 1e-8, rng),
               InvalidOptions);
}

TEST(OssermanScan, ConformalExamples) {
  CounterRng rng(27);
  OssermanScan a = osserman_scan(CurvatureField(make_metric("1a", "0", "x1^2 - x2^2", "0")), P{2, 1, -1, 3},
                                 OperatorKind::conformal, 6, 1e-8, rng);
  EXPECT_TRUE(a.constant);
  EXPECT_TRUE(spectra_match(a.spectrum, {0.0, 0.0, 0.5, -0.5}, 1e-8));
  OssermanScan b = osserman_scan(CurvatureField(make_metric("1b", "0", "x1^2 + x2^2", "0")), P{2, 1, -1, 3},
                                 OperatorKind::conformal, 6, 1e-8, rng);
  EXPECT_TRUE(b.constant);
  EXPECT_TRUE(spectra_match(b.spectrum, {0.0, 0.0, 0.5 * I, -0.5 * I}, 1e-8));
}

TEST(OssermanScan, StrictMetricsAreNilpotentOsserman) {
  CounterRng rng(28);
  for (int n = 0; n < 10; ++n) {
    WalkerMetric m;
    m.psi33 = random_poly_in(rng, 0b1100, 4, 3);
    m.psi34 = random_poly_in(rng, 0b1100, 4, 3);
    m.psi44 = random_poly_in(rng, 0b1100, 4, 3);
    OssermanScan s = osserman_scan(CurvatureField(m), random_point(rng), OperatorKind::jacobi, 4, 1e-8, rng);
    EXPECT_TRUE(s.constant);
    EXPECT_TRUE(spectra_match(s.spectrum, {0.0, 0.0, 0.0, 0.0}, 1e-12));
    ASSERT_TRUE(s.spacelike.max_nilpotency_index.has_value());
    EXPECT_LE(*s.spacelike.max_nilpotency_index, 2);
  }
}

class OperatorProperties : public ::testing::TestWithParam<int> {};

TEST_P(OperatorProperties, CayleyHamiltonAndMinimality) {
  CounterRng rng(1000 + static_cast<std::uint64_t>(GetParam()));
  Mat4<Rational> a = random_operator(rng);
  UPoly cp = char_poly(a);
  UPoly mp = min_poly(a);
  EXPECT_TRUE(is_zero(cp.evaluate(a)));
  EXPECT_TRUE(is_zero(mp.evaluate(a)));
  EXPECT_TRUE(divides(mp, cp));
  EXPECT_EQ(mp.leading(), Rational(1));
  // no lower-degree monic annihilator: the powers I, A, ..., A^{d-1} are independent
  Eigen::MatrixXd stack(16, mp.degree());
  Mat4<Rational> power = identity_mat4<Rational>();
  for (int d = 0; d < mp.degree(); ++d) {
    for (int i = 0; i < 16; ++i) {
      stack(i, d) = power[i / 4][i % 4].to_double();
    }
    power = power * a;
  }
  EXPECT_EQ(Eigen::FullPivLU<Eigen::MatrixXd>(stack).rank(), mp.degree());
  EXPECT_EQ(is_diagonalizable(a), gcd(mp, mp.derivative()).degree() == 0);
}

TEST_P(OperatorProperties, EigenvaluesMatchTraceAndDeterminant) {
  CounterRng rng(2000 + static_cast<std::uint64_t>(GetParam()));
  Mat4<Rational> a = random_operator(rng);
  UPoly cp = char_poly(a);
  std::vector<Complex> ev = eigenvalues(cp);
  ASSERT_EQ(ev.size(), 4U);
  Complex sum(0), prod(1);
  for (const Complex& z : ev) {
    sum += z;
    prod *= z;
    Complex r(0);
    for (int k = cp.degree(); k >= 0; --k) {
      r = r * z + cp.coeff(static_cast<std::size_t>(k)).to_double();
    }
    EXPECT_LE(std::abs(r), 1e-9 * std::max(1.0, std::pow(std::abs(z), 4)));
  }
  EXPECT_NEAR(std::abs(sum - trace(a).to_double()), 0.0, 1e-9 * std::max(1.0, std::abs(trace(a).to_double())));
  double det = determinant(a).to_double();
  EXPECT_NEAR(std::abs(prod - det), 0.0, 1e-9 * std::max(1.0, std::abs(det)));
}

INSTANTIATE_TEST_SUITE_P(Randomized, OperatorProperties, ::testing::Range(0, 40));

// The region rules of every conformal catalog entry, recomputed from the dense
// (numeric-inverse, no Walker shortcut) Weyl tensor rather than the polynomial pipeline.
TEST(CatalogMinPoly, RegionRulesAgreeWithDenseOracle) {
  CounterRng rng(29);
  for (const CatalogEntry& e : catalog_entries()) {
    if (e.kind != OperatorKind::conformal) {
      continue;
    }
    for (const MinPolyRegion& region : e.min_poly_rules) {
      for (int n = 0; n < 3; ++n) {
        P p = region.sample(rng);
        ASSERT_TRUE(region.contains(p)) << e.id << " " << region.name;
        SymMatrix4<Rational> g = metric_matrix(e.metric, p);
        UnitVector u = sample_unit_vector(g, 1, rng);
        Mat4<Rational> op = unit_normalized(dense_conformal_jacobi(e.metric, p, u.direction), u);
        EXPECT_EQ(min_poly(op), region.expected(p)) << e.id << " " << region.name;
      }
    }
  }
}

// Frozen values for the block-3 rules: m = lambda^3 - r lambda with r the squared
// nonzero eigenvalue, at fixed rational points.
TEST(CatalogMinPoly, BlockThreeFrozenValues) {
  CounterRng rng(30);
  struct Case {
    const char* id;
    P point;
    Rational r;
  };
  const Case cases[] = {
      {"thm61-3a", P{1, 1, 0, 0}, Rational(49, 4)},
      {"thm61-3a", P{Rational(1, 2), 0, 2, -1}, Rational(5, 8)},
      {"thm61-3b", P{1, 1, 0, 0}, Rational(-49, 4)},
      {"thm61-3c", P{1, 1, 0, 0}, Rational(9, 4)},
      {"thm61-3c", P{2, -1, 3, 1}, Rational(-9, 2)},
  };
  for (const Case& c : cases) {
    const CatalogEntry& e = catalog_entry(c.id);
    CurvatureReport<Rational> rep = curvature_report(e.metric, c.point);
    Mat4<Rational> op = unit_operator(rep, OperatorKind::conformal, rng);
    EXPECT_EQ(min_poly(op), up({0, -c.r, 0, 1})) << c.id;
  }
  CurvatureReport<Rational> one_zero = curvature_report(catalog_entry("thm61-3c").metric, P{0, 3, 1, 1});
  EXPECT_EQ(min_poly(unit_operator(one_zero, OperatorKind::conformal, rng)), UPoly::power(3));
  CurvatureReport<Rational> origin = curvature_report(catalog_entry("thm61-3c").metric, P{0, 0, 1, 1});
  EXPECT_EQ(min_poly(unit_operator(origin, OperatorKind::conformal, rng)), UPoly::power(1));
}
