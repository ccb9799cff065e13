#pragma once

#include <array>
#include <cstddef>
#include <memory>

#include "walker/matrix.hpp"
#include "walker/metric.hpp"
#include "walker/poly4.hpp"

namespace walker {

/// gamma[k][i][j] = Gamma^k_ij, so nabla_{d_i} d_j = sum_k Gamma^k_ij d_k (0-based indices).
template <typename T>
using Christoffel = std::array<std::array<std::array<T, 4>, 4>, 4>;

/// Four-index array; for curvature, r[i][j][k][l] = g(R(d_i, d_j) d_l, d_k).
template <typename T>
using Tensor4 = std::array<std::array<std::array<std::array<T, 4>, 4>, 4>, 4>;

template <typename T>
Christoffel<T> zero_christoffel() {
  Christoffel<T> c;
  for (auto& a : c) {
    for (auto& b : a) {
      b.fill(T(0));
    }
  }
  return c;
}

template <typename T>
Tensor4<T> zero_tensor4() {
  Tensor4<T> t;
  for (auto& a : t) {
    for (auto& b : a) {
      for (auto& c : b) {
        c.fill(T(0));
      }
    }
  }
  return t;
}

/**
 * @brief Curvature of a Walker metric as polynomial fields.
 *
 * Because det g = 1 the inverse metric is polynomial, and so are the Christoffel
 * symbols, the Riemann tensor and the Ricci tensor. Built once per metric, then
 * evaluated exactly or in floats at any point.
 *
 * Conventions: R(x,y) = nabla_x nabla_y - nabla_y nabla_x - nabla_[x,y],
 * R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik,
 * and the lowered tensor is R_ijkl = g(R(d_i,d_j) d_l, d_k) (last two slots swapped
 * relative to the operator, so the non-diagonalizable Osserman family has R_1331 = 4k).
 */
class CurvatureField {
public:
  explicit CurvatureField(WalkerMetric metric)
      : metric_(std::move(metric)), g_(metric_.matrix()), ginv_(metric_.inverse_matrix()) {
    build_christoffel();
    build_riemann();
    build_ricci();
  }

  [[nodiscard]] const WalkerMetric& metric() const noexcept { return metric_; }
  [[nodiscard]] const SymMatrix4<Poly4>& g() const noexcept { return g_; }
  [[nodiscard]] const SymMatrix4<Poly4>& g_inverse() const noexcept { return ginv_; }
  [[nodiscard]] const Christoffel<Poly4>& christoffel() const noexcept { return gamma_; }
  [[nodiscard]] const Tensor4<Poly4>& riemann() const noexcept { return riemann_; }
  [[nodiscard]] const SymMatrix4<Poly4>& ricci() const noexcept { return ricci_; }

private:
  void build_christoffel() {
    gamma_ = zero_christoffel<Poly4>();
    // dg[a](i,j) = d_a g_ij
    std::array<SymMatrix4<Poly4>, 4> dg;
    for (int a = 0; a < 4; ++a) {
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i; j < 4; ++j) {
          dg[a](i, j) = g_(i, j).differentiate(a + 1);
        }
      }
    }
    const Rational half(1, 2);
    for (std::size_t k = 0; k < 4; ++k) {
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i; j < 4; ++j) {
          Poly4 sum;
          for (std::size_t l = 0; l < 4; ++l) {
            if (ginv_(k, l).is_zero()) {
              continue;
            }
            Poly4 first = dg[i](j, l) + dg[j](i, l) - dg[l](i, j);
            if (!first.is_zero()) {
              sum += ginv_(k, l) * first;
            }
          }
          gamma_[k][i][j] = half * sum;
          gamma_[k][j][i] = gamma_[k][i][j];
        }
      }
    }
  }

  void build_riemann() {
    // mixed[l][i][j][k] = R^l_ijk, antisymmetric in (i,j)
    Tensor4<Poly4> mixed = zero_tensor4<Poly4>();
    for (std::size_t l = 0; l < 4; ++l) {
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
          for (std::size_t k = 0; k < 4; ++k) {
            Poly4 r = gamma_[l][j][k].differentiate(static_cast<int>(i) + 1) -
                      gamma_[l][i][k].differentiate(static_cast<int>(j) + 1);
            for (std::size_t m = 0; m < 4; ++m) {
              if (!gamma_[l][i][m].is_zero() && !gamma_[m][j][k].is_zero()) {
                r += gamma_[l][i][m] * gamma_[m][j][k];
              }
              if (!gamma_[l][j][m].is_zero() && !gamma_[m][i][k].is_zero()) {
                r -= gamma_[l][j][m] * gamma_[m][i][k];
              }
            }
            mixed[l][i][j][k] = r;
            mixed[l][j][i][k] = -r;
          }
        }
      }
    }
    riemann_ = zero_tensor4<Poly4>();
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t k = 0; k < 4; ++k) {
          for (std::size_t l = 0; l < 4; ++l) {
            Poly4 s;
            for (std::size_t m = 0; m < 4; ++m) {
              if (!mixed[m][i][j][l].is_zero() && !g_(m, k).is_zero()) {
                s += mixed[m][i][j][l] * g_(m, k);
              }
            }
            riemann_[i][j][k][l] = s;
          }
        }
      }
    }
  }

  void build_ricci() {
    // rho(x,y) = sum_ij g^ij g(R(x, e_i) e_j, y) = sum_ij g^ij R(x, e_i, y, e_j)
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = a; b < 4; ++b) {
        Poly4 s;
        for (std::size_t i = 0; i < 4; ++i) {
          for (std::size_t j = 0; j < 4; ++j) {
            if (!ginv_(i, j).is_zero() && !riemann_[a][i][b][j].is_zero()) {
              s += ginv_(i, j) * riemann_[a][i][b][j];
            }
          }
        }
        ricci_(a, b) = s;
      }
    }
  }

  WalkerMetric metric_;
  SymMatrix4<Poly4> g_;
  SymMatrix4<Poly4> ginv_;
  Christoffel<Poly4> gamma_;
  Tensor4<Poly4> riemann_;
  SymMatrix4<Poly4> ricci_;
};

/**
 * @brief Curvature quantities at a single point.
 *
 * `ricci` and `scalar` are the g-traces of `riemann` taken at the point; `weyl` is the
 * lowered conformal curvature W_ijkl = g(W(d_i,d_j) d_l, d_k) for m = 4.
 */
template <typename T>
struct CurvatureReport {
  Point4<T> point;
  SymMatrix4<T> g;
  SymMatrix4<T> g_inverse;
  Christoffel<T> christoffel;
  Tensor4<T> riemann;
  SymMatrix4<T> ricci;
  T scalar{0};
  Tensor4<T> weyl;
};

/**
 * @brief Weyl tensor assembled from R, rho, tau and g (dimension 4):
 * W(x,y)z = R(x,y)z + tau/6 {g(y,z)x - g(x,z)y}
 *           + 1/2 {g(x,z) rho y + g(rho x,z) y - g(y,z) rho x - g(rho y,z) x}.
 * The + sign on the Ricci bracket is the one that makes W totally trace-free.
 */
template <typename T>
Tensor4<T> assemble_weyl(const Tensor4<T>& r, const SymMatrix4<T>& g, const SymMatrix4<T>& rho, const T& tau) {
  Tensor4<T> w;
  const T tau6 = tau / T(6);
  const T half = T(1) / T(2);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t l = 0; l < 4; ++l) {
          T v = r[i][j][k][l];
          v += tau6 * (g(i, k) * g(j, l) - g(i, l) * g(j, k));
          v += half * (g(i, l) * rho(j, k) + rho(i, l) * g(j, k) - g(j, l) * rho(i, k) - rho(j, l) * g(i, k));
          w[i][j][k][l] = v;
        }
      }
    }
  }
  return w;
}

template <typename T>
CurvatureReport<T> curvature_report(const CurvatureField& field, const Point4<T>& p) {
  CurvatureReport<T> rep;
  rep.point = p;
  rep.g = evaluate(field.g(), p);
  rep.g_inverse = evaluate(field.g_inverse(), p);
  rep.christoffel = zero_christoffel<T>();
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i; j < 4; ++j) {
        rep.christoffel[k][i][j] = evaluate(field.christoffel()[k][i][j], p);
        rep.christoffel[k][j][i] = rep.christoffel[k][i][j];
      }
    }
  }
  rep.riemann = zero_tensor4<T>();
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t l = 0; l < 4; ++l) {
          const Poly4& poly = field.riemann()[i][j][k][l];
          if (!poly.is_zero()) {
            rep.riemann[i][j][k][l] = evaluate(poly, p);
          }
        }
      }
    }
  }
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a; b < 4; ++b) {
      T s(0);
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
          s += rep.g_inverse(i, j) * rep.riemann[a][i][b][j];
        }
      }
      rep.ricci(a, b) = s;
    }
  }
  T tau(0);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      tau += rep.g_inverse(i, j) * rep.ricci(i, j);
    }
  }
  rep.scalar = tau;
  rep.weyl = assemble_weyl(rep.riemann, rep.g, rep.ricci, rep.scalar);
  return rep;
}

template <typename T>
CurvatureReport<T> curvature_report(const WalkerMetric& metric, const Point4<T>& p) {
  return curvature_report(CurvatureField(metric), p);
}

/// Christoffel symbols of a metric at a point.
template <typename T>
Christoffel<T> christoffel(const CurvatureField& field, const Point4<T>& p) {
  Christoffel<T> c = zero_christoffel<T>();
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i; j < 4; ++j) {
        c[k][i][j] = evaluate(field.christoffel()[k][i][j], p);
        c[k][j][i] = c[k][i][j];
      }
    }
  }
  return c;
}

/// Linear operator on the tangent space at `base`, built from the vector `direction`.
template <typename T>
struct Operator4 {
  Mat4<T> matrix;
  Point4<T> base;
  Vec4<T> direction;
};

namespace detail {
// op[l][j] = sum_{i,k,m} g^{lm} T_{j i m k} x^i x^k, the matrix of y -> T(y, x) x.
template <typename T>
Mat4<T> jacobi_matrix(const Tensor4<T>& lowered, const SymMatrix4<T>& ginv, const Vec4<T>& x) {
  // low[j][m] = g(T(d_j, x) x, d_m) = T(d_j, x, d_m, x)
  Mat4<T> low = zero_mat4<T>();
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t m = 0; m < 4; ++m) {
      T s(0);
      for (std::size_t i = 0; i < 4; ++i) {
        if (x[i] == T(0)) {
          continue;
        }
        for (std::size_t k = 0; k < 4; ++k) {
          if (x[k] == T(0)) {
            continue;
          }
          s += lowered[j][i][m][k] * x[i] * x[k];
        }
      }
      low[j][m] = s;
    }
  }
  Mat4<T> op = zero_mat4<T>();
  for (std::size_t l = 0; l < 4; ++l) {
    for (std::size_t j = 0; j < 4; ++j) {
      T s(0);
      for (std::size_t m = 0; m < 4; ++m) {
        s += ginv(l, m) * low[j][m];
      }
      op[l][j] = s;
    }
  }
  return op;
}
} // namespace detail

/// Matrix of y -> R(y, x) x in the coordinate frame.
template <typename T>
Operator4<T> jacobi_operator(const CurvatureReport<T>& rep, const Vec4<T>& x) {
  return {detail::jacobi_matrix(rep.riemann, rep.g_inverse, x), rep.point, x};
}

/// Matrix of y -> W(y, x) x in the coordinate frame.
template <typename T>
Operator4<T> conformal_jacobi_operator(const CurvatureReport<T>& rep, const Vec4<T>& x) {
  return {detail::jacobi_matrix(rep.weyl, rep.g_inverse, x), rep.point, x};
}

template <typename T>
Operator4<T> jacobi_operator(const WalkerMetric& metric, const Point4<T>& p, const Vec4<T>& x) {
  return jacobi_operator(curvature_report(metric, p), x);
}

template <typename T>
Operator4<T> conformal_jacobi_operator(const WalkerMetric& metric, const Point4<T>& p, const Vec4<T>& x) {
  return conformal_jacobi_operator(curvature_report(metric, p), x);
}

/// rho(v, v) at p, from the polynomial Ricci field.
template <typename T>
T ricci_quadratic(const CurvatureField& field, const Point4<T>& p, const Vec4<T>& v) {
  T s(0);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      const Poly4& rho = field.ricci()(a, b);
      if (!rho.is_zero()) {
        s += evaluate(rho, p) * v[a] * v[b];
      }
    }
  }
  return s;
}

/// Lowered component R(a, b, c, d) evaluated on arbitrary vectors.
template <typename T>
T contract(const Tensor4<T>& t, const Vec4<T>& a, const Vec4<T>& b, const Vec4<T>& c, const Vec4<T>& d) {
  T s(0);
  for (std::size_t i = 0; i < 4; ++i) {
    if (a[i] == T(0)) {
      continue;
    }
    for (std::size_t j = 0; j < 4; ++j) {
      if (b[j] == T(0)) {
        continue;
      }
      for (std::size_t k = 0; k < 4; ++k) {
        if (c[k] == T(0)) {
          continue;
        }
        for (std::size_t l = 0; l < 4; ++l) {
          s += t[i][j][k][l] * a[i] * b[j] * c[k] * d[l];
        }
      }
    }
  }
  return s;
}

} // namespace walker
