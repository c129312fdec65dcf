#ifndef WEYLPINCH_CURVATURE_HPP
#define WEYLPINCH_CURVATURE_HPP

#include <cmath>

#include "weylpinch/linalg.hpp"
#include "weylpinch/metric.hpp"

namespace weylpinch {

// -------------------------------------------------------------------
// Pointwise coordinate curvature. Conventions:
//
//   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
//   R(X^Y, Z^W) = g(R(X,Y)W, Z)
//   R_ijkl = g_km R^m_lij,  Ric_jl = g^ik R_ijkl,  s = g^jl Ric_jl
//
// so that the round 4-sphere of radius 1 has R(X^Y, X^Y) = +1 for
// orthonormal X, Y and scalar curvature 12, and the curvature of a
// constant-curvature space is K (g_ik g_jl - g_il g_jk).
// -------------------------------------------------------------------

struct CurvaturePoint {
  MetricValue metric;
  Ten3 gamma{};   // gamma[k][i][j] = Gamma^k_ij
  Ten4 riemann{}; // fully lowered R_ijkl
  Mat4 ricci{};
  double scalar = 0.0;
  Mat4 ric0{};    // Ric - (s/4) g
  Ten4 weyl{};
};

inline Ten3 christoffel(const MetricValue& m) {
  Ten3 gamma{};
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        double s = 0.0;
        for (int mm = 0; mm < 4; ++mm)
          s += m.g_inv[k][mm] *
               (m.dg[i][j][mm] + m.dg[j][i][mm] - m.dg[mm][i][j]);
        gamma[k][i][j] = gamma[k][j][i] = 0.5 * s;
      }
  return gamma;
}

namespace detail {

/// Rescale to the linear chart y_i = c_i x_i with c_i = sqrt(g_ii), in
/// which the metric has unit diagonal. Assembling curvature there and
/// scaling the tensors back avoids the catastrophic cancellation the raw
/// chart suffers near coordinate degeneracies (poles, large affine radii).
inline MetricValue equilibrate(const MetricValue& m, Vec4& c) {
  for (int i = 0; i < 4; ++i) c[i] = std::sqrt(m.g[i][i]);
  MetricValue h;
  h.point = m.point;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      h.g[i][j] = m.g[i][j] / (c[i] * c[j]);
      h.g_inv[i][j] = m.g_inv[i][j] * c[i] * c[j];
    }
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        h.dg[k][i][j] = m.dg[k][i][j] / (c[k] * c[i] * c[j]);
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          h.d2g[k][l][i][j] = m.d2g[k][l][i][j] / (c[k] * c[l] * c[i] * c[j]);
  h.sqrt_det_g = m.sqrt_det_g / (c[0] * c[1] * c[2] * c[3]);
  return h;
}

} // namespace detail

inline CurvaturePoint curvature_from_metric(const MetricValue& m_raw) {
  Vec4 cs{};
  MetricValue m = detail::equilibrate(m_raw, cs);
  CurvaturePoint c;
  c.gamma = christoffel(m);

  // d g^-1 = -g^-1 (dg) g^-1
  Ten3 dginv{};
  for (int p = 0; p < 4; ++p) {
    Mat4 t{};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        double s = 0.0;
        for (int q = 0; q < 4; ++q) s += m.dg[p][a][q] * m.g_inv[q][b];
        t[a][b] = s;
      }
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        double s = 0.0;
        for (int q = 0; q < 4; ++q) s += m.g_inv[a][q] * t[q][b];
        dginv[p][a][b] = -s;
      }
  }

  // dgamma[p][k][i][j] = d_p Gamma^k_ij
  std::array<Ten3, 4> dgamma{};
  for (int p = 0; p < 4; ++p)
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
          double s = 0.0;
          for (int mm = 0; mm < 4; ++mm) {
            s += dginv[p][k][mm] *
                 (m.dg[i][j][mm] + m.dg[j][i][mm] - m.dg[mm][i][j]);
            s += m.g_inv[k][mm] * (m.d2g[p][i][j][mm] + m.d2g[p][j][i][mm] -
                                   m.d2g[p][mm][i][j]);
          }
          dgamma[p][k][i][j] = dgamma[p][k][j][i] = 0.5 * s;
        }

  // R^l_kij = d_i Gamma^l_jk - d_j Gamma^l_ik + G^m_jk G^l_im - G^m_ik G^l_jm
  Ten4 rup{}; // rup[l][k][i][j]
  for (int l = 0; l < 4; ++l)
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          double s = dgamma[i][l][j][k] - dgamma[j][l][i][k];
          for (int mm = 0; mm < 4; ++mm)
            s += c.gamma[mm][j][k] * c.gamma[l][i][mm] -
                 c.gamma[mm][i][k] * c.gamma[l][j][mm];
          rup[l][k][i][j] = s;
        }

  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int mm = 0; mm < 4; ++mm) s += m.g[k][mm] * rup[mm][l][i][j];
          c.riemann[i][j][k][l] = s;
        }

  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) s += m.g_inv[i][k] * c.riemann[i][j][k][l];
      c.ricci[j][l] = s;
    }
  {
    double s = 0.0;
    for (int j = 0; j < 4; ++j)
      for (int l = 0; l < 4; ++l) s += m.g_inv[j][l] * c.ricci[j][l];
    c.scalar = s;
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      c.ric0[i][j] = c.ricci[i][j] - 0.25 * c.scalar * m.g[i][j];

  // Weyl part: subtract the Kulkarni-Nomizu product of the Schouten
  // tensor A = (Ric - (s/6) g)/2 with g.
  Mat4 a{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      a[i][j] = 0.5 * (c.ricci[i][j] - c.scalar / 6.0 * m.g[i][j]);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          c.weyl[i][j][k][l] =
              c.riemann[i][j][k][l] -
              (a[i][k] * m.g[j][l] + a[j][l] * m.g[i][k] -
               a[i][l] * m.g[j][k] - a[j][k] * m.g[i][l]);

  // scale the tensors back to the original chart
  c.metric = m_raw;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        c.gamma[k][i][j] *= cs[i] * cs[j] / cs[k];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      c.ricci[i][j] *= cs[i] * cs[j];
      c.ric0[i][j] *= cs[i] * cs[j];
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double f = cs[i] * cs[j] * cs[k] * cs[l];
          c.riemann[i][j][k][l] *= f;
          c.weyl[i][j][k][l] *= f;
        }
    }
  return c;
}

inline CurvaturePoint curvature_at(const ChartMetric& metric, const Vec4& point) {
  return curvature_from_metric(metric_at(metric, point));
}

namespace detail {

// Hodge star applied to the last index pair of a 4-tensor of 2-forms.
inline Ten4 star_second_pair(const Ten4& w, const Mat4& g_inv,
                             double sqrt_det_g, int orientation) {
  static const int eps_perm[24][5] = {
      // permutations of (0,1,2,3) with parity
      {0,1,2,3,+1},{0,1,3,2,-1},{0,2,1,3,-1},{0,2,3,1,+1},{0,3,1,2,+1},{0,3,2,1,-1},
      {1,0,2,3,-1},{1,0,3,2,+1},{1,2,0,3,+1},{1,2,3,0,-1},{1,3,0,2,-1},{1,3,2,0,+1},
      {2,0,1,3,+1},{2,0,3,1,-1},{2,1,0,3,-1},{2,1,3,0,+1},{2,3,0,1,+1},{2,3,1,0,-1},
      {3,0,1,2,-1},{3,0,2,1,+1},{3,1,0,2,+1},{3,1,2,0,-1},{3,2,0,1,-1},{3,2,1,0,+1},
  };
  // raise the last two indices of w
  Ten4 up{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          double s = 0.0;
          for (int mm = 0; mm < 4; ++mm)
            for (int n = 0; n < 4; ++n)
              s += g_inv[a][mm] * g_inv[b][n] * w[i][j][mm][n];
          up[i][j][a][b] = s;
        }
  Ten4 out{};
  double f = 0.5 * sqrt_det_g * orientation;
  for (const auto& p : eps_perm) {
    int k = p[0], l = p[1], aa = p[2], bb = p[3], sign = p[4];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        out[i][j][k][l] += f * sign * up[i][j][aa][bb];
  }
  return out;
}

} // namespace detail

/// W -> (W + sign * (star W))/2 with the star acting on the last index
/// pair; sign = +1 selects the self-dual part for the given orientation.
inline Ten4 weyl_dual_part(const CurvaturePoint& c, int orientation, int sign) {
  Ten4 sw = detail::star_second_pair(c.weyl, c.metric.g_inv,
                                     c.metric.sqrt_det_g, orientation);
  Ten4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          out[i][j][k][l] =
              0.5 * (c.weyl[i][j][k][l] + sign * sw[i][j][k][l]);
  return out;
}

struct WeylPlusTensor {
  Ten4 wplus{};          // W+ fully lowered, at the base point
  double grad_norm_sq = 0.0; // |nabla W+|^2
  Ten3 divergence{};     // (delta W+)_jkl = -g^im nabla_m W+_ijkl
  double div_norm = 0.0; // |delta W+|
};

/// Self-dual Weyl part with its first covariant derivative. The
/// coordinate derivative of the W+ field uses central differences with
/// step 1e-4 per coordinate; the connection correction terms are
/// analytic at the base point.
inline WeylPlusTensor weyl_plus_at(const ChartMetric& metric, const Vec4& point,
                                   int orientation = +1) {
  CurvaturePoint c0 = curvature_at(metric, point);
  WeylPlusTensor out;
  out.wplus = weyl_dual_part(c0, orientation, +1);

  const double h = 1e-4;
  std::array<Ten4, 4> dw{}; // dw[m] = d_m W+
  for (int mdir = 0; mdir < 4; ++mdir) {
    Vec4 xp = point, xm = point;
    xp[mdir] += h;
    xm[mdir] -= h;
    Ten4 wp = weyl_dual_part(curvature_at(metric, xp), orientation, +1);
    Ten4 wm = weyl_dual_part(curvature_at(metric, xm), orientation, +1);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l)
            dw[mdir][i][j][k][l] =
                (wp[i][j][k][l] - wm[i][j][k][l]) / (2.0 * h);
  }

  // nabla_m W_ijkl = d_m W_ijkl - G^p_mi W_pjkl - G^p_mj W_ipkl
  //                - G^p_mk W_ijpl - G^p_ml W_ijkp
  std::array<Ten4, 4> nw{};
  for (int mdir = 0; mdir < 4; ++mdir)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            double s = dw[mdir][i][j][k][l];
            for (int p = 0; p < 4; ++p) {
              s -= c0.gamma[p][mdir][i] * out.wplus[p][j][k][l];
              s -= c0.gamma[p][mdir][j] * out.wplus[i][p][k][l];
              s -= c0.gamma[p][mdir][k] * out.wplus[i][j][p][l];
              s -= c0.gamma[p][mdir][l] * out.wplus[i][j][k][p];
            }
            nw[mdir][i][j][k][l] = s;
          }

  const Mat4& gi = c0.metric.g_inv;
  // |nabla W+|^2: contract every slot with g^-1
  auto raise_all = [&](const Ten4& t) {
    Ten4 r{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            double up = 0.0;
            for (int a = 0; a < 4; ++a)
              for (int b = 0; b < 4; ++b)
                for (int cc = 0; cc < 4; ++cc)
                  for (int d = 0; d < 4; ++d)
                    up += gi[i][a] * gi[j][b] * gi[k][cc] * gi[l][d] *
                          t[a][b][cc][d];
            r[i][j][k][l] = up;
          }
    return r;
  };
  std::array<Ten4, 4> nw_up;
  for (int mdir = 0; mdir < 4; ++mdir) nw_up[mdir] = raise_all(nw[mdir]);
  double total = 0.0;
  for (int m1 = 0; m1 < 4; ++m1)
    for (int m2 = 0; m2 < 4; ++m2) {
      if (gi[m1][m2] == 0.0) continue;
      double dot = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l)
              dot += nw[m1][i][j][k][l] * nw_up[m2][i][j][k][l];
      total += gi[m1][m2] * dot;
    }
  out.grad_norm_sq = total;

  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i)
          for (int mdir = 0; mdir < 4; ++mdir)
            s += gi[i][mdir] * nw[mdir][i][j][k][l];
        out.divergence[j][k][l] = -s;
      }
  {
    double s = 0.0;
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double up = 0.0;
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
              for (int cc = 0; cc < 4; ++cc)
                up += gi[j][a] * gi[k][b] * gi[l][cc] * out.divergence[a][b][cc];
          s += out.divergence[j][k][l] * up;
        }
    out.div_norm = std::sqrt(std::max(0.0, s));
  }
  return out;
}

} // namespace weylpinch

#endif
