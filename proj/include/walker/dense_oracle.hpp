#pragma once

#include <array>
#include <cstddef>

#include "walker/curvature.hpp"
#include "walker/matrix.hpp"
#include "walker/metric.hpp"

// Generic pointwise curvature from the 2-jet of an arbitrary metric matrix: numeric
// Gauss-Jordan inverse, plain index loops, no Walker structure assumed. Kept as an
// independent witness for the polynomial pipeline.

namespace walker::dense {

/// Value, first and second partial derivatives of a metric matrix at one point.
template <typename T>
struct MetricJet {
  Mat4<T> g;
  std::array<Mat4<T>, 4> dg;                 // dg[a][i][j] = d_a g_ij
  std::array<std::array<Mat4<T>, 4>, 4> ddg; // ddg[a][b][i][j] = d_a d_b g_ij
};

/// 2-jet of a Walker metric at p, every entry multiplied by `scale`.
template <typename T>
MetricJet<T> walker_jet(const WalkerMetric& m, const Point4<T>& p, const T& scale = T(1)) {
  MetricJet<T> jet;
  SymMatrix4<Poly4> g = m.matrix();
  jet.g = zero_mat4<T>();
  for (auto& a : jet.dg) {
    a = zero_mat4<T>();
  }
  for (auto& a : jet.ddg) {
    for (auto& b : a) {
      b = zero_mat4<T>();
    }
  }
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const Poly4& e = g(i, j);
      jet.g[i][j] = scale * evaluate(e, p);
      for (int a = 0; a < 4; ++a) {
        Poly4 da = e.differentiate(a + 1);
        jet.dg[a][i][j] = scale * evaluate(da, p);
        for (int b = 0; b < 4; ++b) {
          jet.ddg[a][b][i][j] = scale * evaluate(da.differentiate(b + 1), p);
        }
      }
    }
  }
  return jet;
}

template <typename T>
struct DenseCurvature {
  Mat4<T> g_inverse;
  Christoffel<T> christoffel;
  Tensor4<T> riemann_mixed;   // [l][i][j][k] = R^l_ijk
  Tensor4<T> riemann_lowered; // [i][j][k][l] = g(R(d_i,d_j) d_l, d_k)
  Mat4<T> ricci;              // rho_ab
  T scalar{0};
  Tensor4<T> weyl_mixed;      // [l][i][j][k] = W^l_ijk
};

template <typename T>
DenseCurvature<T> compute(const MetricJet<T>& jet) {
  DenseCurvature<T> out;
  auto inv = gauss_jordan_inverse(jet.g);
  if (!inv) {
    throw Error("dense oracle: singular metric matrix");
  }
  const Mat4<T>& h = *inv;
  out.g_inverse = h;
  const T half = T(1) / T(2);

  // d_a g^{kl} = -g^{kp} (d_a g_pq) g^{ql}
  std::array<Mat4<T>, 4> dh;
  for (std::size_t a = 0; a < 4; ++a) {
    Mat4<T> t = h * jet.dg[a] * h;
    dh[a] = scaled(T(-1), t);
  }

  // first-kind symbols and their derivatives: G_lij = (d_i g_jl + d_j g_il - d_l g_ij) / 2
  Christoffel<T> first = zero_christoffel<T>();
  std::array<Christoffel<T>, 4> dfirst;
  for (std::size_t l = 0; l < 4; ++l) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        first[l][i][j] = half * (jet.dg[i][j][l] + jet.dg[j][i][l] - jet.dg[l][i][j]);
      }
    }
  }
  for (std::size_t a = 0; a < 4; ++a) {
    dfirst[a] = zero_christoffel<T>();
    for (std::size_t l = 0; l < 4; ++l) {
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
          dfirst[a][l][i][j] = half * (jet.ddg[a][i][j][l] + jet.ddg[a][j][i][l] - jet.ddg[a][l][i][j]);
        }
      }
    }
  }

  out.christoffel = zero_christoffel<T>();
  std::array<Christoffel<T>, 4> dgamma;
  for (auto& d : dgamma) {
    d = zero_christoffel<T>();
  }
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        T s(0);
        for (std::size_t l = 0; l < 4; ++l) {
          s += h[k][l] * first[l][i][j];
        }
        out.christoffel[k][i][j] = s;
        for (std::size_t a = 0; a < 4; ++a) {
          T ds(0);
          for (std::size_t l = 0; l < 4; ++l) {
            ds += dh[a][k][l] * first[l][i][j] + h[k][l] * dfirst[a][l][i][j];
          }
          dgamma[a][k][i][j] = ds;
        }
      }
    }
  }

  const Christoffel<T>& gam = out.christoffel;
  out.riemann_mixed = zero_tensor4<T>();
  for (std::size_t l = 0; l < 4; ++l) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t k = 0; k < 4; ++k) {
          T r = dgamma[i][l][j][k] - dgamma[j][l][i][k];
          for (std::size_t m = 0; m < 4; ++m) {
            r += gam[l][i][m] * gam[m][j][k] - gam[l][j][m] * gam[m][i][k];
          }
          out.riemann_mixed[l][i][j][k] = r;
        }
      }
    }
  }

  out.riemann_lowered = zero_tensor4<T>();
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t l = 0; l < 4; ++l) {
          T s(0);
          for (std::size_t m = 0; m < 4; ++m) {
            s += jet.g[k][m] * out.riemann_mixed[m][i][j][l];
          }
          out.riemann_lowered[i][j][k][l] = s;
        }
      }
    }
  }

  // Ricci operator rho^c_a = sum_ij g^ij R^c_{a i j}, then lower with g.
  Mat4<T> rho_op = zero_mat4<T>();
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t a = 0; a < 4; ++a) {
      T s(0);
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
          s += h[i][j] * out.riemann_mixed[c][a][i][j];
        }
      }
      rho_op[c][a] = s;
    }
  }
  out.ricci = zero_mat4<T>();
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      T s(0);
      for (std::size_t c = 0; c < 4; ++c) {
        s += jet.g[c][b] * rho_op[c][a];
      }
      out.ricci[a][b] = s;
    }
  }
  out.scalar = trace(rho_op);

  // W(x,y)z = R(x,y)z + tau/6 {g(y,z)x - g(x,z)y}
  //           + 1/2 {g(x,z) rho y + g(rho x,z) y - g(y,z) rho x - g(rho y,z) x}
  const T tau6 = out.scalar / T(6);
  out.weyl_mixed = zero_tensor4<T>();
  for (std::size_t l = 0; l < 4; ++l) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t k = 0; k < 4; ++k) {
          T dil = i == l ? T(1) : T(0);
          T djl = j == l ? T(1) : T(0);
          T w = out.riemann_mixed[l][i][j][k];
          w += tau6 * (jet.g[j][k] * dil - jet.g[i][k] * djl);
          w += half * (jet.g[i][k] * rho_op[l][j] + out.ricci[i][k] * djl - jet.g[j][k] * rho_op[l][i] -
                       out.ricci[j][k] * dil);
          out.weyl_mixed[l][i][j][k] = w;
        }
      }
    }
  }
  return out;
}

} // namespace walker::dense
