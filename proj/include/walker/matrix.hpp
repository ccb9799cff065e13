#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>

#include "walker/errors.hpp"
#include "walker/rational.hpp"

namespace walker {

/// Dense 4x4 array, row-major: m[row][col].
template <typename T>
using Mat4 = std::array<std::array<T, 4>, 4>;

template <typename T>
Mat4<T> zero_mat4() {
  Mat4<T> m;
  for (auto& row : m) {
    row.fill(T(0));
  }
  return m;
}

template <typename T>
Mat4<T> identity_mat4() {
  Mat4<T> m = zero_mat4<T>();
  for (std::size_t i = 0; i < 4; ++i) {
    m[i][i] = T(1);
  }
  return m;
}

template <typename T>
Mat4<T> operator*(const Mat4<T>& a, const Mat4<T>& b) {
  Mat4<T> r = zero_mat4<T>();
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      if (a[i][k] == T(0)) {
        continue;
      }
      for (std::size_t j = 0; j < 4; ++j) {
        r[i][j] += a[i][k] * b[k][j];
      }
    }
  }
  return r;
}

template <typename T>
Mat4<T> operator+(Mat4<T> a, const Mat4<T>& b) {
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      a[i][j] += b[i][j];
    }
  }
  return a;
}

template <typename T>
Mat4<T> scaled(const T& s, Mat4<T> a) {
  for (auto& row : a) {
    for (auto& v : row) {
      v *= s;
    }
  }
  return a;
}

template <typename T>
std::array<T, 4> apply(const Mat4<T>& a, const std::array<T, 4>& v) {
  std::array<T, 4> r{T(0), T(0), T(0), T(0)};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      r[i] += a[i][j] * v[j];
    }
  }
  return r;
}

template <typename T>
T trace(const Mat4<T>& a) {
  return a[0][0] + a[1][1] + a[2][2] + a[3][3];
}

template <typename T>
bool is_zero(const Mat4<T>& a) {
  for (const auto& row : a) {
    for (const auto& v : row) {
      if (!(v == T(0))) {
        return false;
      }
    }
  }
  return true;
}

/**
 * @brief Symmetric 4x4 array holding only its 10 independent entries.
 *
 * Symmetry holds by construction: (i,j) and (j,i) address the same slot.
 */
template <typename T>
class SymMatrix4 {
public:
  SymMatrix4() { data_.fill(T(0)); }

  [[nodiscard]] const T& operator()(std::size_t i, std::size_t j) const { return data_[slot(i, j)]; }
  T& operator()(std::size_t i, std::size_t j) { return data_[slot(i, j)]; }

  [[nodiscard]] Mat4<T> dense() const {
    Mat4<T> m;
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        m[i][j] = (*this)(i, j);
      }
    }
    return m;
  }

  friend bool operator==(const SymMatrix4& a, const SymMatrix4& b) { return a.data_ == b.data_; }

private:
  static std::size_t slot(std::size_t i, std::size_t j) {
    if (i > j) {
      std::swap(i, j);
    }
    // upper triangle, row by row: (0,0..3)=0..3, (1,1..3)=4..6, (2,2..3)=7..8, (3,3)=9
    constexpr std::array<std::size_t, 4> row_start{0, 4, 7, 9};
    return row_start[i] + (j - i);
  }

  std::array<T, 10> data_;
};

namespace detail {
inline bool pivot_better(const Rational& cand, const Rational& best) { return best.is_zero() && !cand.is_zero(); }
inline bool pivot_better(double cand, double best) { return std::abs(cand) > std::abs(best); }
} // namespace detail

/**
 * @brief Generic Gauss-Jordan inverse with no structural shortcuts.
 *
 * Exact for Rational (first nonzero pivot), partial pivoting for double.
 * Returns nullopt for a singular matrix.
 */
template <typename T>
std::optional<Mat4<T>> gauss_jordan_inverse(Mat4<T> a) {
  Mat4<T> inv = identity_mat4<T>();
  for (std::size_t col = 0; col < 4; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < 4; ++r) {
      if (detail::pivot_better(a[r][col], a[pivot][col])) {
        pivot = r;
      }
    }
    if (a[pivot][col] == T(0)) {
      return std::nullopt;
    }
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    T p = a[col][col];
    for (std::size_t j = 0; j < 4; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t r = 0; r < 4; ++r) {
      if (r == col || a[r][col] == T(0)) {
        continue;
      }
      T f = a[r][col];
      for (std::size_t j = 0; j < 4; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

/// Determinant by cofactor expansion along the first row (exact for Rational).
template <typename T>
T determinant(const Mat4<T>& m) {
  auto det3 = [&](std::size_t skip) {
    std::array<std::size_t, 3> c{};
    std::size_t n = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      if (j != skip) {
        c[n++] = j;
      }
    }
    return m[1][c[0]] * (m[2][c[1]] * m[3][c[2]] - m[2][c[2]] * m[3][c[1]]) -
           m[1][c[1]] * (m[2][c[0]] * m[3][c[2]] - m[2][c[2]] * m[3][c[0]]) +
           m[1][c[2]] * (m[2][c[0]] * m[3][c[1]] - m[2][c[1]] * m[3][c[0]]);
  };
  T d(0);
  for (std::size_t j = 0; j < 4; ++j) {
    T term = m[0][j] * det3(j);
    if (j % 2 == 0) {
      d += term;
    } else {
      d -= term;
    }
  }
  return d;
}

/// g(x, y) for a metric matrix g.
template <typename T>
T inner(const SymMatrix4<T>& g, const std::array<T, 4>& x, const std::array<T, 4>& y) {
  T s(0);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      s += g(i, j) * x[i] * y[j];
    }
  }
  return s;
}

} // namespace walker
