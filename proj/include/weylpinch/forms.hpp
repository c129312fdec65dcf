#ifndef WEYLPINCH_FORMS_HPP
#define WEYLPINCH_FORMS_HPP

#include <cmath>

#include "weylpinch/curvature.hpp"
#include "weylpinch/linalg.hpp"

namespace weylpinch {

// -------------------------------------------------------------------
// Orthonormal frames and the six-dimensional space of 2-forms.
//
// TwoForm components live in the frame basis (e1^e2, e1^e3, e1^e4,
// e2^e3, e2^e4, e3^e4), each simple wedge of unit norm. The Hodge star
// follows <*w1, w2> dvol = w1 ^ w2 with dvol = e^1^e^2^e^3^e^4, so
// *(e1^e2) = e3^e4, *(e1^e3) = -e2^e4, *(e1^e4) = e2^e3.
// -------------------------------------------------------------------

struct Frame {
  std::array<Vec4, 4> e;     // e[a] = coordinate components of frame vector a
  std::array<Vec4, 4> theta; // dual coframe, theta[a](e[b]) = delta_ab
  int orientation = +1;      // chart orientation this frame is positive for
};

/// Gram-Schmidt on the coordinate basis. The result is positively
/// oriented for the coordinate orientation; orientation = -1 swaps the
/// last two vectors.
inline Frame orthonormal_frame(const MetricValue& m, int orientation = +1) {
  Frame f;
  f.orientation = orientation;
  auto gdot = [&](const Vec4& a, const Vec4& b) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s += m.g[i][j] * a[i] * b[j];
    return s;
  };
  for (int a = 0; a < 4; ++a) {
    Vec4 v{};
    v[a] = 1.0;
    for (int b = 0; b < a; ++b) {
      double d = gdot(v, f.e[b]);
      v = sub4(v, scale4(f.e[b], d));
    }
    double n = gdot(v, v);
    if (!(n > 0.0)) throw InvalidArgument("orthonormal_frame: degenerate metric");
    f.e[a] = scale4(v, 1.0 / std::sqrt(n));
  }
  if (orientation < 0) std::swap(f.e[2], f.e[3]);

  // coframe = inverse of the matrix with frame vectors as columns;
  // equivalently theta[a]_i = g_ij e[a]^j for an orthonormal frame
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i) {
      double s = 0.0;
      for (int j = 0; j < 4; ++j) s += m.g[i][j] * f.e[a][j];
      f.theta[a][i] = s;
    }
  return f;
}

struct TwoForm {
  std::array<double, 6> c{};
};

// index pairs of the simple basis, in order
constexpr int kPairA[6] = {0, 0, 0, 1, 1, 2};
constexpr int kPairB[6] = {1, 2, 3, 2, 3, 3};

inline TwoForm operator+(const TwoForm& a, const TwoForm& b) {
  TwoForm r;
  for (int i = 0; i < 6; ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}

inline TwoForm operator-(const TwoForm& a, const TwoForm& b) {
  TwoForm r;
  for (int i = 0; i < 6; ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}

inline TwoForm operator*(const TwoForm& a, double s) {
  TwoForm r;
  for (int i = 0; i < 6; ++i) r.c[i] = a.c[i] * s;
  return r;
}

inline TwoForm operator*(double s, const TwoForm& a) { return a * s; }

inline double inner(const TwoForm& a, const TwoForm& b) {
  double s = 0.0;
  for (int i = 0; i < 6; ++i) s += a.c[i] * b.c[i];
  return s;
}

inline double form_norm(const TwoForm& a) { return std::sqrt(inner(a, a)); }

inline TwoForm star(const TwoForm& w) {
  // basis order (12, 13, 14, 23, 24, 34)
  return TwoForm{{w.c[5], -w.c[4], w.c[3], w.c[2], -w.c[1], w.c[0]}};
}

/// Coefficient of dvol in w1 ^ w2.
inline double wedge_coeff(const TwoForm& a, const TwoForm& b) {
  return a.c[0] * b.c[5] + a.c[5] * b.c[0] - a.c[1] * b.c[4] -
         a.c[4] * b.c[1] + a.c[2] * b.c[3] + a.c[3] * b.c[2];
}

/// X ^ Y for frame-component vectors.
inline TwoForm wedge_vectors(const Vec4& x, const Vec4& y) {
  TwoForm w;
  for (int i = 0; i < 6; ++i)
    w.c[i] = x[kPairA[i]] * y[kPairB[i]] - x[kPairB[i]] * y[kPairA[i]];
  return w;
}

/// The frame 2-form of a lowered coordinate 2-form F_ij.
inline TwoForm form_from_coords(const Mat4& f_coord, const Frame& fr) {
  TwoForm w;
  for (int i = 0; i < 6; ++i) {
    const Vec4& ea = fr.e[kPairA[i]];
    const Vec4& eb = fr.e[kPairB[i]];
    double s = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q) s += f_coord[p][q] * ea[p] * eb[q];
    w.c[i] = s;
  }
  return w;
}

/// Orthonormal bases of the self-dual and anti-self-dual subspaces:
///   alpha_1^± = (e12 ± e34)/sqrt2
///   alpha_2^± = (e13 ± e42)/sqrt2
///   alpha_3^± = (e14 ± e23)/sqrt2
/// returned in the order (a1+, a2+, a3+, a1-, a2-, a3-).
inline std::array<TwoForm, 6> lambda_basis(const Frame& = Frame{}) {
  const double r = 1.0 / std::sqrt(2.0);
  std::array<TwoForm, 6> a{};
  a[0].c = {r, 0, 0, 0, 0, r};
  a[1].c = {0, r, 0, 0, -r, 0};
  a[2].c = {0, 0, r, r, 0, 0};
  a[3].c = {r, 0, 0, 0, 0, -r};
  a[4].c = {0, r, 0, 0, r, 0};
  a[5].c = {0, 0, r, -r, 0, 0};
  return a;
}

/// Frame components of the curvature (all four slots contracted with
/// frame vectors) together with frame Ricci and traceless Ricci.
struct FrameCurvature {
  Ten4 r{};     // R(e_a, e_b, e_c, e_d) in the bilinear pairing convention
  Mat4 ricci{}; // Ric(e_a, e_b)
  Mat4 ric0{};
  double s = 0.0;
  std::array<std::array<double, 6>, 6> pair2{}; // R on the simple form basis

  double pair(const TwoForm& a, const TwoForm& b) const {
    double s2 = 0.0;
    for (int i = 0; i < 6; ++i) {
      if (a.c[i] == 0.0) continue;
      double row = 0.0;
      for (int j = 0; j < 6; ++j) row += pair2[i][j] * b.c[j];
      s2 += a.c[i] * row;
    }
    return s2;
  }
};

inline FrameCurvature frame_curvature(const CurvaturePoint& c, const Frame& f) {
  FrameCurvature fc;
  fc.s = c.scalar;
  // contract iteratively to keep the cost at 4^5 per stage
  Ten4 t1{}, t2{}, t3{};
  for (int a = 0; a < 4; ++a)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int i = 0; i < 4; ++i) s += c.riemann[i][j][k][l] * f.e[a][i];
          t1[a][j][k][l] = s;
        }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int j = 0; j < 4; ++j) s += t1[a][j][k][l] * f.e[b][j];
          t2[a][b][k][l] = s;
        }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int cc = 0; cc < 4; ++cc)
        for (int l = 0; l < 4; ++l) {
          double s = 0.0;
          for (int k = 0; k < 4; ++k) s += t2[a][b][k][l] * f.e[cc][k];
          t3[a][b][cc][l] = s;
        }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int cc = 0; cc < 4; ++cc)
        for (int d = 0; d < 4; ++d) {
          double s = 0.0;
          for (int l = 0; l < 4; ++l) s += t3[a][b][cc][l] * f.e[d][l];
          fc.r[a][b][cc][d] = s;
        }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = 0.0, s0 = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          s += c.ricci[i][j] * f.e[a][i] * f.e[b][j];
          s0 += c.ric0[i][j] * f.e[a][i] * f.e[b][j];
        }
      fc.ricci[a][b] = s;
      fc.ric0[a][b] = s0;
    }
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      fc.pair2[i][j] = fc.r[kPairA[i]][kPairB[i]][kPairA[j]][kPairB[j]];
  return fc;
}

/// The curvature operator as a bilinear form on the lambda basis, with
/// its block structure: W± + (s/12) I on the diagonal blocks and the
/// traceless Ricci coupling off-diagonal.
struct OperatorBlocks {
  std::array<std::array<double, 6>, 6> full{};
  Mat3 wplus{};
  Mat3 wminus{};
  Mat3 ric0_block{};
  double scalar_term = 0.0; // s/12
  double s = 0.0;
};

inline OperatorBlocks curvature_operator(const FrameCurvature& fc) {
  OperatorBlocks ob;
  ob.s = fc.s;
  ob.scalar_term = fc.s / 12.0;
  auto alphas = lambda_basis();
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j) {
      double v = fc.pair(alphas[i], alphas[j]);
      ob.full[i][j] = ob.full[j][i] = v;
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      ob.wplus[i][j] = ob.full[i][j] - (i == j ? ob.scalar_term : 0.0);
      ob.wminus[i][j] = ob.full[i + 3][j + 3] - (i == j ? ob.scalar_term : 0.0);
      ob.ric0_block[i][j] = ob.full[i][j + 3];
    }
  return ob;
}

inline OperatorBlocks curvature_operator(const CurvaturePoint& c, const Frame& f) {
  return curvature_operator(frame_curvature(c, f));
}

} // namespace weylpinch

#endif
