#ifndef WEYLPINCH_LINALG_HPP
#define WEYLPINCH_LINALG_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "weylpinch/errors.hpp"

namespace weylpinch {

using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;
using Mat3 = std::array<Vec3, 3>;
using Mat4 = std::array<Vec4, 4>;
using Ten3 = std::array<Mat4, 4>; // t[a][i][j]
using Ten4 = std::array<Ten3, 4>; // t[i][j][k][l]

inline Mat4 mat4_identity() {
  Mat4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

inline double dot4(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

inline double norm4(const Vec4& a) { return std::sqrt(dot4(a, a)); }

inline Vec4 scale4(const Vec4& a, double c) {
  return {a[0] * c, a[1] * c, a[2] * c, a[3] * c};
}

inline Vec4 add4(const Vec4& a, const Vec4& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

inline Vec4 sub4(const Vec4& a, const Vec4& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

inline Vec4 mat4_vec(const Mat4& m, const Vec4& v) {
  Vec4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i] += m[i][j] * v[j];
  return r;
}

inline Mat4 mat4_mul(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

inline Mat4 mat4_transpose(const Mat4& a) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = a[j][i];
  return r;
}

inline double mat4_max_abs(const Mat4& a) {
  double m = 0.0;
  for (const auto& row : a)
    for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

inline double frobenius4(const Mat4& a) {
  double s = 0.0;
  for (const auto& row : a)
    for (double v : row) s += v * v;
  return std::sqrt(s);
}

/// Cholesky factor of a symmetric matrix, g = L L^T with L lower
/// triangular. Empty result if g is not positive definite.
inline std::optional<Mat4> cholesky4(const Mat4& g) {
  Mat4 l{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = g[i][j];
      for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      if (i == j) {
        if (!(s > 0.0)) return std::nullopt;
        l[i][i] = std::sqrt(s);
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  }
  return l;
}

inline double det_from_cholesky(const Mat4& l) {
  double d = l[0][0] * l[1][1] * l[2][2] * l[3][3];
  return d * d;
}

/// Inverse of g from its Cholesky factor.
inline Mat4 spd_inverse(const Mat4& l) {
  Mat4 inv{};
  for (int col = 0; col < 4; ++col) {
    Vec4 y{};
    // forward solve L y = e_col
    for (int i = 0; i < 4; ++i) {
      double s = (i == col) ? 1.0 : 0.0;
      for (int k = 0; k < i; ++k) s -= l[i][k] * y[k];
      y[i] = s / l[i][i];
    }
    // back solve L^T x = y
    for (int i = 3; i >= 0; --i) {
      double s = y[i];
      for (int k = i + 1; k < 4; ++k) s -= l[k][i] * inv[k][col];
      inv[i][col] = s / l[i][i];
    }
  }
  // symmetrize against rounding
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      double v = 0.5 * (inv[i][j] + inv[j][i]);
      inv[i][j] = inv[j][i] = v;
    }
  return inv;
}

inline double dot3(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

inline Vec3 mat3_vec(const Mat3& m, const Vec3& v) {
  Vec3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i] += m[i][j] * v[j];
  return r;
}

inline double mat3_max_abs(const Mat3& a) {
  double m = 0.0;
  for (const auto& row : a)
    for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

inline double frobenius_sq3(const Mat3& a) {
  double s = 0.0;
  for (const auto& row : a)
    for (double v : row) s += v * v;
  return s;
}

inline double trace3(const Mat3& a) { return a[0][0] + a[1][1] + a[2][2]; }

struct Eigen3 {
  Vec3 values;                  // ascending
  std::array<Vec3, 3> vectors;  // vectors[k] pairs with values[k], unit length
};

namespace detail {

inline void jacobi_rotate(Mat3& a, Mat3& v, int p, int q) {
  double apq = a[p][q];
  if (apq == 0.0) return;
  double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
  double t = (theta >= 0.0)
                 ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                 : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
  double c = 1.0 / std::sqrt(1.0 + t * t);
  double s = t * c;
  double tau = s / (1.0 + c);
  double app = a[p][p], aqq = a[q][q];
  a[p][p] = app - t * apq;
  a[q][q] = aqq + t * apq;
  a[p][q] = a[q][p] = 0.0;
  int r = 3 - p - q; // remaining index
  double apr = a[p][r], aqr = a[q][r];
  a[p][r] = a[r][p] = apr - s * (aqr + tau * apr);
  a[q][r] = a[r][q] = aqr + s * (apr - tau * aqr);
  for (int i = 0; i < 3; ++i) {
    double vip = v[i][p], viq = v[i][q];
    v[i][p] = vip - s * (viq + tau * vip);
    v[i][q] = viq + s * (vip - tau * viq);
  }
}

} // namespace detail

/// Eigen-decomposition of a symmetric 3x3 matrix by cyclic Jacobi sweeps.
/// Eigenvalues ascend; eigenvectors of (near-)equal eigenvalues are made
/// deterministic by Gram-Schmidt against the coordinate axes, and each
/// vector's largest-magnitude entry is made positive.
inline Eigen3 eigen3_sym(const Mat3& a_in) {
  double scale = std::max(1.0, mat3_max_abs(a_in));
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(a_in[i][j] - a_in[j][i]) > 1e-10 * scale)
        throw InvalidArgument("eigen3_sym: input is not symmetric");

  Mat3 a = a_in;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      double v = 0.5 * (a[i][j] + a[j][i]);
      a[i][j] = a[j][i] = v;
    }
  Mat3 v = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
    if (off <= 1e-300 || off <= 1e-16 * scale * 1e-2) break;
    detail::jacobi_rotate(a, v, 0, 1);
    detail::jacobi_rotate(a, v, 0, 2);
    detail::jacobi_rotate(a, v, 1, 2);
  }

  std::array<int, 3> order = {0, 1, 2};
  Vec3 diag = {a[0][0], a[1][1], a[2][2]};
  if (diag[order[0]] > diag[order[1]]) std::swap(order[0], order[1]);
  if (diag[order[1]] > diag[order[2]]) std::swap(order[1], order[2]);
  if (diag[order[0]] > diag[order[1]]) std::swap(order[0], order[1]);

  Eigen3 out;
  for (int k = 0; k < 3; ++k) {
    out.values[k] = diag[order[k]];
    for (int i = 0; i < 3; ++i) out.vectors[k][i] = v[i][order[k]];
  }

  // Deterministic basis inside (near-)degenerate eigenspaces.
  double gap_tol = 1e-10 * std::max(1.0, std::abs(out.values[0]) +
                                             std::abs(out.values[2]));
  int k = 0;
  while (k < 3) {
    int m = k + 1;
    while (m < 3 && out.values[m] - out.values[m - 1] <= gap_tol) ++m;
    if (m - k > 1) {
      // projector onto the eigenspace
      Mat3 proj{};
      for (int g = k; g < m; ++g)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            proj[i][j] += out.vectors[g][i] * out.vectors[g][j];
      int filled = 0;
      std::array<Vec3, 3> basis{};
      for (int axis = 0; axis < 3 && filled < m - k; ++axis) {
        Vec3 cand = {proj[0][axis], proj[1][axis], proj[2][axis]};
        for (int g = 0; g < filled; ++g) {
          double d = dot3(cand, basis[g]);
          for (int i = 0; i < 3; ++i) cand[i] -= d * basis[g][i];
        }
        double n = norm3(cand);
        if (n > 0.3) {
          for (int i = 0; i < 3; ++i) cand[i] /= n;
          basis[filled++] = cand;
        }
      }
      if (filled == m - k)
        for (int g = k; g < m; ++g) out.vectors[g] = basis[g - k];
    }
    k = m;
  }

  // Sign convention: largest-magnitude entry positive.
  for (auto& vec : out.vectors) {
    int imax = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(vec[i]) > std::abs(vec[imax])) imax = i;
    if (vec[imax] < 0.0)
      for (double& c : vec) c = -c;
  }
  return out;
}

/// Fixed-order pairwise reduction; the result is independent of any
/// parallel evaluation order used to fill the incoming buffer.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() == 0) return 0.0;
  if (v.size() == 1) return v[0];
  if (v.size() <= 8) {
    double s = v[0];
    for (std::size_t i = 1; i < v.size(); ++i) s += v[i];
    return s;
  }
  std::size_t h = v.size() / 2;
  return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

} // namespace weylpinch

#endif
