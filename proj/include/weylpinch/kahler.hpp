#ifndef WEYLPINCH_KAHLER_HPP
#define WEYLPINCH_KAHLER_HPP

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "weylpinch/forms.hpp"
#include "weylpinch/models.hpp"
#include "weylpinch/spectrum.hpp"

namespace weylpinch {

// -------------------------------------------------------------------
// Almost-Hermitian layer. All pointwise work happens in an orthonormal
// frame, where the metric is the identity: J is an orthogonal
// anti-symmetric matrix, omega(X,Y) = <JX, Y>, and |omega| = sqrt(2).
// -------------------------------------------------------------------

struct KahlerStructure {
  Mat4 j{};        // frame components of the almost-complex structure
  TwoForm omega{}; // omega(X,Y) = <JX,Y>, self-dual for the complex orientation
  bool integrable = false;
};

namespace detail {

inline TwoForm omega_from_j(const Mat4& j) {
  // omega(e_a, e_b) = <J e_a, e_b> = j[b][a]
  TwoForm w;
  for (int i = 0; i < 6; ++i) w.c[i] = j[kPairB[i]][kPairA[i]];
  return w;
}

} // namespace detail

/// Frame components of a model's declared complex structure.
inline KahlerStructure kahler_from_model(const BuiltinModel& model,
                                         const MetricValue& m, const Frame& f) {
  if (!model.kahler || !model.complex_structure)
    throw InvalidArgument("model '" + model.chart.name +
                          "' has no declared Kahler structure");
  Mat4 jc = model.complex_structure(m.point);
  KahlerStructure k;
  // J_frame = theta * J_coord * E
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int jj = 0; jj < 4; ++jj)
          s += f.theta[a][i] * jc[i][jj] * f.e[b][jj];
      k.j[a][b] = s;
    }
  k.omega = detail::omega_from_j(k.j);
  k.integrable = true;
  return k;
}

/// Orthogonal almost-complex structure adapted to the frame itself
/// (J e1 = e2, J e3 = e4). Not integrable in general; enough for the
/// pointwise sphere-average identities.
inline KahlerStructure pointwise_frame_j() {
  KahlerStructure k;
  k.j[1][0] = 1.0; k.j[0][1] = -1.0;
  k.j[3][2] = 1.0; k.j[2][3] = -1.0;
  k.omega = detail::omega_from_j(k.j);
  return k;
}

// ---- pointwise curvature functions ----------------------------------

inline double holomorphic_sectional(const FrameCurvature& fc,
                                    const KahlerStructure& k, const Vec4& x) {
  if (std::abs(norm4(x) - 1.0) > 1e-10)
    throw InvalidArgument("holomorphic_sectional: X must be a unit vector");
  TwoForm phi = wedge_vectors(x, mat4_vec(k.j, x));
  return fc.pair(phi, phi);
}

/// R(X^JX, Y^JY) for an admissible pair: unit X, Y with Y orthogonal to
/// both X and JX.
inline double bisectional(const FrameCurvature& fc, const KahlerStructure& k,
                          const Vec4& x, const Vec4& y) {
  Vec4 jx = mat4_vec(k.j, x);
  if (std::abs(norm4(x) - 1.0) > 1e-10 || std::abs(norm4(y) - 1.0) > 1e-10 ||
      std::abs(dot4(x, y)) > 1e-9 || std::abs(dot4(jx, y)) > 1e-9)
    throw InvalidArgument("bisectional: (X, Y) is not an admissible pair");
  return fc.pair(wedge_vectors(x, jx), wedge_vectors(y, mat4_vec(k.j, y)));
}

inline double sectional(const FrameCurvature& fc, const Vec4& x, const Vec4& y) {
  TwoForm b = wedge_vectors(x, y);
  double n = inner(b, b);
  return fc.pair(b, b) / n;
}

/// Biorthogonal curvature of the plane spanned by orthonormal (X, Y):
/// the mean of the sectional curvatures of the plane and its orthogonal
/// complement. The complement basis comes from Gram-Schmidt against the
/// frame axes; its simple form equals the Hodge dual of X^Y, which the
/// extremizer uses for analytic gradients.
inline double biorthogonal(const FrameCurvature& fc, const Vec4& x,
                           const Vec4& y) {
  if (std::abs(norm4(x) - 1.0) > 1e-10 || std::abs(norm4(y) - 1.0) > 1e-10 ||
      std::abs(dot4(x, y)) > 1e-9)
    throw InvalidArgument("biorthogonal: (X, Y) must be orthonormal");
  Vec4 comp[2];
  int filled = 0;
  for (int axis = 0; axis < 4 && filled < 2; ++axis) {
    Vec4 v{};
    v[axis] = 1.0;
    v = sub4(v, scale4(x, dot4(v, x)));
    v = sub4(v, scale4(y, dot4(v, y)));
    for (int k = 0; k < filled; ++k)
      v = sub4(v, scale4(comp[k], dot4(v, comp[k])));
    double n = norm4(v);
    if (n > 0.25) comp[filled++] = scale4(v, 1.0 / n);
  }
  TwoForm b = wedge_vectors(x, y);
  TwoForm bp = wedge_vectors(comp[0], comp[1]);
  return 0.5 * (fc.pair(b, b) + fc.pair(bp, bp));
}

// ---- deterministic sampling grids ------------------------------------

namespace detail {

inline double frac(double x) { return x - std::floor(x); }

/// Kronecker lattice on S^3 in Hopf coordinates (a Fibonacci-type grid).
inline Vec4 sphere3_point(int i, int n) {
  constexpr double plastic = 1.32471795724474602596;
  const double a1 = 1.0 / plastic;
  const double a2 = 1.0 / (plastic * plastic);
  double u = (i + 0.5) / n;
  double eta = 0.5 * std::acos(1.0 - 2.0 * u);
  double xi1 = 2.0 * 3.14159265358979323846 * frac(i * a1);
  double xi2 = 2.0 * 3.14159265358979323846 * frac(i * a2);
  return {std::cos(eta) * std::cos(xi1), std::cos(eta) * std::sin(xi1),
          std::sin(eta) * std::cos(xi2), std::sin(eta) * std::sin(xi2)};
}

/// Fibonacci grid on S^2.
inline Vec3 sphere2_point(int i, int n) {
  constexpr double golden_angle = 2.39996322972865332;
  double z = 1.0 - 2.0 * (i + 0.5) / n;
  double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  double phi = i * golden_angle;
  return {r * std::cos(phi), r * std::sin(phi), z};
}

/// Projected-gradient refinement of a smooth function on S^3.
template <class F, class G>
double refine_sphere(const F& f, const G& grad, Vec4& x, bool maximize,
                     double grad_tol) {
  double sign = maximize ? 1.0 : -1.0;
  double fx = f(x);
  double step = 0.05;
  for (int iter = 0; iter < 3000; ++iter) {
    Vec4 g = grad(x);
    double gx = dot4(g, x);
    Vec4 gt = sub4(g, scale4(x, gx));
    if (norm4(gt) <= grad_tol) break;
    Vec4 cand = add4(x, scale4(gt, sign * step));
    cand = scale4(cand, 1.0 / norm4(cand));
    double fc2 = f(cand);
    if (sign * (fc2 - fx) > 0.0) {
      x = cand;
      fx = fc2;
      step = std::min(step * 1.3, 0.5);
    } else {
      step *= 0.5;
      if (step < 1e-14) break;
    }
  }
  return fx;
}

/// Projected-gradient refinement over orthonormal pairs (X, Y).
template <class F, class GX, class GY>
double refine_pair(const F& f, const GX& gradx, const GY& grady, Vec4& x,
                   Vec4& y, bool maximize, double grad_tol) {
  double sign = maximize ? 1.0 : -1.0;
  auto retract = [](Vec4& xx, Vec4& yy) {
    xx = scale4(xx, 1.0 / norm4(xx));
    yy = sub4(yy, scale4(xx, dot4(xx, yy)));
    yy = scale4(yy, 1.0 / norm4(yy));
  };
  retract(x, y);
  double fx = f(x, y);
  double step = 0.05;
  for (int iter = 0; iter < 3000; ++iter) {
    Vec4 gx = gradx(x, y);
    Vec4 gy = grady(x, y);
    // tangent projection for the constraints |X| = |Y| = 1, <X,Y> = 0
    Vec4 tx = sub4(gx, add4(scale4(x, dot4(gx, x)), scale4(y, dot4(gx, y))));
    Vec4 ty = sub4(gy, add4(scale4(y, dot4(gy, y)), scale4(x, dot4(gy, x))));
    double gn = std::sqrt(dot4(tx, tx) + dot4(ty, ty));
    if (gn <= grad_tol) break;
    Vec4 cx = add4(x, scale4(tx, sign * step));
    Vec4 cy = add4(y, scale4(ty, sign * step));
    retract(cx, cy);
    double fc2 = f(cx, cy);
    if (sign * (fc2 - fx) > 0.0) {
      x = cx;
      y = cy;
      fx = fc2;
      step = std::min(step * 1.3, 0.5);
    } else {
      step *= 0.5;
      if (step < 1e-14) break;
    }
  }
  return fx;
}

/// Completes a unit vector to an orthonormal basis of its complement.
inline std::array<Vec4, 3> complement_basis(const Vec4& x) {
  std::array<Vec4, 3> out;
  int filled = 0;
  for (int axis = 0; axis < 4 && filled < 3; ++axis) {
    Vec4 v{};
    v[axis] = 1.0;
    v = sub4(v, scale4(x, dot4(v, x)));
    for (int kk = 0; kk < filled; ++kk)
      v = sub4(v, scale4(out[kk], dot4(v, out[kk])));
    double n = norm4(v);
    if (n > 0.25) out[filled++] = scale4(v, 1.0 / n);
  }
  return out;
}

} // namespace detail

// ---- sphere averages --------------------------------------------------

/// Vertices of the 24-cell, (±e_i ± e_j)/sqrt2: a spherical quadrature
/// on S^3 exact for polynomials of degree <= 5 with equal weights 1/24.
inline const std::array<Vec4, 24>& sphere24_nodes() {
  static const std::array<Vec4, 24> nodes = [] {
    std::array<Vec4, 24> n{};
    const double r = 1.0 / std::sqrt(2.0);
    int idx = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        for (int si = -1; si <= 1; si += 2)
          for (int sj = -1; sj <= 1; sj += 2) {
            Vec4 v{};
            v[i] = si * r;
            v[j] = sj * r;
            n[idx++] = v;
          }
    return n;
  }();
  return nodes;
}

struct SphereAverage {
  double h_av = 0.0;          // quadrature average of H over unit tangents
  double s_star = 0.0;        // 2 R(omega, omega)
  double berger_pred = 0.0;   // s/6
  double hall_murphy_pred = 0.0; // (s + 3 s*)/24
};

/// Exact degree-4 sphere average of the holomorphic sectional curvature,
/// plus the two closed-form predictions it is compared against.
inline SphereAverage sphere_average_h(const FrameCurvature& fc,
                                      const KahlerStructure& k) {
  SphereAverage out;
  double acc = 0.0;
  for (const Vec4& x : sphere24_nodes()) {
    TwoForm phi = wedge_vectors(x, mat4_vec(k.j, x));
    acc += fc.pair(phi, phi);
  }
  out.h_av = acc / 24.0;
  out.s_star = 2.0 * fc.pair(k.omega, k.omega);
  out.berger_pred = fc.s / 6.0;
  out.hall_murphy_pred = (fc.s + 3.0 * out.s_star) / 24.0;
  return out;
}

// ---- extremization ----------------------------------------------------

struct ExtremizeBudget {
  int sphere_samples = 8192;
  int plane_samples_x = 400;
  int plane_samples_dir = 64;
};

struct CurvatureSamples {
  double h_max = 0.0, h_min = 0.0;
  double b_max = 0.0, b_min = 0.0;
  double kperp_max = 0.0, kperp_min = 0.0;
  double h_av = 0.0, s_star = 0.0;
  Vec4 h_argmax{}, h_argmin{};
};

/// Dense deterministic sampling followed by projected-gradient
/// refinement of H, B and the biorthogonal curvature.
inline CurvatureSamples extremize_curvatures(const FrameCurvature& fc,
                                             const KahlerStructure& k,
                                             const ExtremizeBudget& budget = {}) {
  if (budget.sphere_samples < 1000)
    throw InvalidArgument("extremize_curvatures: budget too small "
                          "(need at least 1000 sphere samples)");
  double scale = 1.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      scale = std::max(scale, std::abs(fc.pair2[i][j]));
  const double grad_tol = 1e-11 * scale;

  auto h_val = [&](const Vec4& x) {
    TwoForm phi = wedge_vectors(x, mat4_vec(k.j, x));
    return fc.pair(phi, phi);
  };
  auto h_grad = [&](const Vec4& x) {
    Vec4 jx = mat4_vec(k.j, x);
    TwoForm phi = wedge_vectors(x, jx);
    Vec4 g{};
    for (int a = 0; a < 4; ++a) {
      Vec4 ea{};
      ea[a] = 1.0;
      Vec4 jea = mat4_vec(k.j, ea);
      TwoForm dphi = wedge_vectors(ea, jx) + wedge_vectors(x, jea);
      g[a] = 2.0 * fc.pair(dphi, phi);
    }
    return g;
  };
  // B(X) = R(phi, omega - phi): the complement of a holomorphic plane is
  // again holomorphic and X^JX + Y^JY = omega.
  auto b_val = [&](const Vec4& x) {
    TwoForm phi = wedge_vectors(x, mat4_vec(k.j, x));
    return fc.pair(phi, k.omega - phi);
  };
  auto b_grad = [&](const Vec4& x) {
    Vec4 jx = mat4_vec(k.j, x);
    TwoForm phi = wedge_vectors(x, jx);
    Vec4 g{};
    for (int a = 0; a < 4; ++a) {
      Vec4 ea{};
      ea[a] = 1.0;
      Vec4 jea = mat4_vec(k.j, ea);
      TwoForm dphi = wedge_vectors(ea, jx) + wedge_vectors(x, jea);
      g[a] = fc.pair(dphi, k.omega) - 2.0 * fc.pair(dphi, phi);
    }
    return g;
  };

  CurvatureSamples out;

  auto extremize_s3 = [&](auto&& fval, auto&& fgrad, double& vmax, double& vmin,
                          Vec4* argmax, Vec4* argmin) {
    struct Seed { double v; Vec4 x; };
    std::vector<Seed> best_hi, best_lo;
    const int keep = 10;
    for (int i = 0; i < budget.sphere_samples; ++i) {
      Vec4 x = detail::sphere3_point(i, budget.sphere_samples);
      double v = fval(x);
      if (best_hi.size() < keep || v > best_hi.back().v) {
        best_hi.push_back({v, x});
        for (std::size_t b = best_hi.size() - 1; b > 0 && best_hi[b].v > best_hi[b - 1].v; --b)
          std::swap(best_hi[b], best_hi[b - 1]);
        if (best_hi.size() > keep) best_hi.pop_back();
      }
      if (best_lo.size() < keep || v < best_lo.back().v) {
        best_lo.push_back({v, x});
        for (std::size_t b = best_lo.size() - 1; b > 0 && best_lo[b].v < best_lo[b - 1].v; --b)
          std::swap(best_lo[b], best_lo[b - 1]);
        if (best_lo.size() > keep) best_lo.pop_back();
      }
    }
    vmax = -1e300;
    vmin = 1e300;
    for (auto& s : best_hi) {
      Vec4 x = s.x;
      double v = detail::refine_sphere(fval, fgrad, x, true, grad_tol);
      if (v > vmax) { vmax = v; if (argmax) *argmax = x; }
    }
    for (auto& s : best_lo) {
      Vec4 x = s.x;
      double v = detail::refine_sphere(fval, fgrad, x, false, grad_tol);
      if (v < vmin) { vmin = v; if (argmin) *argmin = x; }
    }
  };

  extremize_s3(h_val, h_grad, out.h_max, out.h_min, &out.h_argmax, &out.h_argmin);
  extremize_s3(b_val, b_grad, out.b_max, out.b_min, nullptr, nullptr);

  // biorthogonal curvature over 2-planes, encoded by orthonormal pairs
  auto kp_val = [&](const Vec4& x, const Vec4& y) {
    TwoForm b = wedge_vectors(x, y);
    TwoForm sb = star(b);
    return 0.5 * (fc.pair(b, b) + fc.pair(sb, sb)) / inner(b, b);
  };
  // gradients of the unnormalized functional; the pair stays orthonormal
  // through the retraction so the normalization is 1 at evaluation points
  auto kp_gx = [&](const Vec4& x, const Vec4& y) {
    TwoForm b = wedge_vectors(x, y);
    TwoForm sb = star(b);
    Vec4 g{};
    for (int a = 0; a < 4; ++a) {
      Vec4 ea{};
      ea[a] = 1.0;
      TwoForm db = wedge_vectors(ea, y);
      g[a] = fc.pair(db, b) + fc.pair(star(db), sb);
    }
    return g;
  };
  auto kp_gy = [&](const Vec4& x, const Vec4& y) {
    TwoForm b = wedge_vectors(x, y);
    TwoForm sb = star(b);
    Vec4 g{};
    for (int a = 0; a < 4; ++a) {
      Vec4 ea{};
      ea[a] = 1.0;
      TwoForm db = wedge_vectors(x, ea);
      g[a] = fc.pair(db, b) + fc.pair(star(db), sb);
    }
    return g;
  };

  struct PairSeed { double v; Vec4 x, y; };
  std::vector<PairSeed> hi, lo;
  const int keep = 8;
  int nx = std::max(16, budget.plane_samples_x);
  int nd = std::max(8, budget.plane_samples_dir);
  for (int i = 0; i < nx; ++i) {
    Vec4 x = detail::sphere3_point(i, nx);
    auto comp = detail::complement_basis(x);
    for (int j = 0; j < nd; ++j) {
      Vec3 d = detail::sphere2_point(j, nd);
      Vec4 y = add4(add4(scale4(comp[0], d[0]), scale4(comp[1], d[1])),
                    scale4(comp[2], d[2]));
      double v = kp_val(x, y);
      if (hi.size() < keep || v > hi.back().v) {
        hi.push_back({v, x, y});
        for (std::size_t b = hi.size() - 1; b > 0 && hi[b].v > hi[b - 1].v; --b)
          std::swap(hi[b], hi[b - 1]);
        if (hi.size() > keep) hi.pop_back();
      }
      if (lo.size() < keep || v < lo.back().v) {
        lo.push_back({v, x, y});
        for (std::size_t b = lo.size() - 1; b > 0 && lo[b].v < lo[b - 1].v; --b)
          std::swap(lo[b], lo[b - 1]);
        if (lo.size() > keep) lo.pop_back();
      }
    }
  }
  out.kperp_max = -1e300;
  out.kperp_min = 1e300;
  for (auto& s : hi) {
    Vec4 x = s.x, y = s.y;
    double v = detail::refine_pair(kp_val, kp_gx, kp_gy, x, y, true, grad_tol);
    out.kperp_max = std::max(out.kperp_max, v);
  }
  for (auto& s : lo) {
    Vec4 x = s.x, y = s.y;
    double v = detail::refine_pair(kp_val, kp_gx, kp_gy, x, y, false, grad_tol);
    out.kperp_min = std::min(out.kperp_min, v);
  }

  SphereAverage av = sphere_average_h(fc, k);
  out.h_av = av.h_av;
  out.s_star = av.s_star;
  return out;
}

// ---- constructive adapted frame (anti-self-dual form of norm sqrt2) ---

namespace detail {

inline Mat4 form_operator(const TwoForm& w) {
  // Phi_ab antisymmetric matrix of the form; the associated operator
  // satisfies <I X, Y> = w(X, Y), i.e. I = Phi^T.
  Mat4 phi{};
  for (int i = 0; i < 6; ++i) {
    phi[kPairA[i]][kPairB[i]] = w.c[i];
    phi[kPairB[i]][kPairA[i]] = -w.c[i];
  }
  return mat4_transpose(phi);
}

} // namespace detail

/// Given an anti-self-dual 2-form phi with |phi| = sqrt2 and a compatible
/// almost-complex structure J, construct an orthonormal basis
/// (E1, JE1, E3, JE3) with phi = E1^JE1 - E3^JE3.
inline std::array<Vec4, 4> lemma1_frame(const TwoForm& phi,
                                        const KahlerStructure& k) {
  double n = form_norm(phi);
  if (std::abs(n - std::sqrt(2.0)) > 1e-9)
    throw InvalidArgument("lemma1_frame: norm must be sqrt(2)");
  TwoForm sp = star(phi);
  double asd = 0.0;
  for (int i = 0; i < 6; ++i) asd = std::max(asd, std::abs(sp.c[i] + phi.c[i]));
  if (asd > 1e-9)
    throw InvalidArgument("lemma1_frame: form is not anti-self-dual");

  Mat4 iop = detail::form_operator(phi);
  for (auto& row : iop)
    for (double& v : row) v *= std::sqrt(2.0) / n;
  const Mat4& jop = k.j;

  // find V with <IV, JV> = 0 by the interpolation argument
  Vec4 v{};
  std::array<double, 4> t{};
  int zero_idx = -1, pos_idx = -1, neg_idx = -1;
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int kk = 0; kk < 4; ++kk) s += iop[kk][i] * jop[kk][i];
    t[i] = s;
    if (std::abs(s) <= 1e-13 && zero_idx < 0) zero_idx = i;
    if (s > 0 && pos_idx < 0) pos_idx = i;
    if (s < 0 && neg_idx < 0) neg_idx = i;
  }
  if (zero_idx >= 0) {
    v[zero_idx] = 1.0;
  } else {
    auto fval = [&](double tt) {
      Vec4 vt{};
      vt[pos_idx] = 1.0 - tt;
      vt[neg_idx] = tt;
      Vec4 iv = mat4_vec(iop, vt);
      Vec4 jv = mat4_vec(jop, vt);
      return dot4(iv, jv);
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (fval(lo) * fval(mid) <= 0.0) hi = mid;
      else lo = mid;
      if (hi - lo < 1e-17) break;
    }
    double tt = 0.5 * (lo + hi);
    v[pos_idx] = 1.0 - tt;
    v[neg_idx] = tt;
  }
  v = scale4(v, 1.0 / norm4(v));

  Vec4 ijv = mat4_vec(iop, mat4_vec(jop, v));
  Vec4 e1 = sub4(v, ijv);
  Vec4 e3 = add4(v, ijv);
  e1 = scale4(e1, 1.0 / norm4(e1));
  e3 = scale4(e3, 1.0 / norm4(e3));
  return {e1, mat4_vec(jop, e1), e3, mat4_vec(jop, e3)};
}

/// Residual |phi - (E1^JE1 - E3^JE3)| of the reconstruction.
inline double lemma1_residual(const TwoForm& phi, const std::array<Vec4, 4>& b) {
  TwoForm rec = wedge_vectors(b[0], b[1]) - wedge_vectors(b[2], b[3]);
  TwoForm diff = rec - phi;
  return form_norm(diff);
}

// ---- verification ops --------------------------------------------------

struct NamedResidual {
  std::string name;
  double value = 0.0;
};

struct Lemma2Result {
  double residual_min = 0.0;  // |s/6 - lambda3^- - 2 B_min|
  double residual_max = 0.0;  // |s/6 - lambda1^- - 2 B_max|
  double bridge_worst = 0.0;  // worst |(s/6 - W^-)(phi,phi) - 4 B(E1,E3)|
};

/// The eigenvalue identities s/6 - lambda3 = 2 B_min and
/// s/6 - lambda1 = 2 B_max for the anti-self-dual spectrum of a Kahler
/// surface, plus the pointwise bridge identity behind them.
inline Lemma2Result verify_lemma2(const FrameCurvature& fc,
                                  const KahlerStructure& k,
                                  const WeylSpectrum& ws,
                                  const CurvatureSamples& samples) {
  if (!k.integrable)
    throw InvalidArgument("verify_lemma2: requires a declared Kahler model");
  Lemma2Result r;
  double s6 = fc.s / 6.0;
  r.residual_min = std::abs(s6 - ws.lambda_minus[2] - 2.0 * samples.b_min);
  r.residual_max = std::abs(s6 - ws.lambda_minus[0] - 2.0 * samples.b_max);

  auto bridge = [&](const TwoForm& phi) {
    // (s/6 - W^-)(phi, phi) = s/2 - R(phi, phi) for |phi|^2 = 2
    auto basis = lemma1_frame(phi, k);
    double b13 = fc.pair(wedge_vectors(basis[0], basis[1]),
                         wedge_vectors(basis[2], basis[3]));
    double lhs = 0.5 * fc.s - fc.pair(phi, phi);
    return std::abs(lhs - 4.0 * b13);
  };
  for (const TwoForm& ef : ws.eigenforms_minus)
    r.bridge_worst = std::max(r.bridge_worst, bridge(std::sqrt(2.0) * ef));
  std::mt19937 rng(20240521u);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto alphas = lambda_basis();
  for (int trial = 0; trial < 16; ++trial) {
    Vec3 c = {dist(rng), dist(rng), dist(rng)};
    double nn = norm3(c);
    if (nn < 1e-3) continue;
    TwoForm phi{};
    for (int i = 0; i < 3; ++i)
      phi = phi + (std::sqrt(2.0) * c[i] / nn) * alphas[3 + i];
    r.bridge_worst = std::max(r.bridge_worst, bridge(phi));
  }
  return r;
}

struct Prop2Result {
  double residual_max = 0.0; // |K_max - s/12 - (l3+ + l3-)/2|
  double residual_min = 0.0; // |K_min - s/12 - (l1+ + l1-)/2|
  bool min_le_half_bmin = true; // s >= 0 branch
  bool max_ge_half_bmax = true; // s <= 0 branch
};

/// Biorthogonal extrema against the eigenvalue formulas
///   K_max - s/12 = (lambda3+ + lambda3-)/2,
///   K_min - s/12 = (lambda1+ + lambda1-)/2,
/// plus the sign-conditional comparisons with B extrema.
inline Prop2Result verify_prop2(const FrameCurvature& fc,
                                const WeylSpectrum& ws,
                                const CurvatureSamples& samples) {
  Prop2Result r;
  double s12 = fc.s / 12.0;
  r.residual_max = std::abs(samples.kperp_max - s12 -
                            0.5 * (ws.lambda_plus[2] + ws.lambda_minus[2]));
  r.residual_min = std::abs(samples.kperp_min - s12 -
                            0.5 * (ws.lambda_plus[0] + ws.lambda_minus[0]));
  double tol = 1e-9 * std::max(1.0, std::abs(fc.s));
  if (fc.s >= 0.0)
    r.min_le_half_bmin = samples.kperp_min <= 0.5 * samples.b_min + tol;
  if (fc.s <= 0.0)
    r.max_ge_half_bmax = samples.kperp_max >= 0.5 * samples.b_max - tol;
  return r;
}

/// J-invariance identities of the curvature of a Kahler surface in
/// adapted frames (V, JV, W, JW):
///   R_ij13 = R_ij24, R_ij14 = -R_ij23,
///   Ric(V,V) = H(V) + B(V,W)  (= s/4 in the Einstein case).
inline std::vector<NamedResidual> kahler_pointwise_identities(
    const FrameCurvature& fc, const KahlerStructure& k, bool einstein,
    int bases = 8) {
  if (!k.integrable)
    throw InvalidArgument("kahler_pointwise_identities: requires a Kahler model");
  std::vector<NamedResidual> out;
  double worst_pair1 = 0.0, worst_pair2 = 0.0, worst_ric = 0.0, worst_einstein = 0.0;
  std::mt19937 rng(891412u);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < bases; ++trial) {
    Vec4 v1 = {dist(rng), dist(rng), dist(rng), dist(rng)};
    double n1 = norm4(v1);
    if (n1 < 1e-2) continue;
    v1 = scale4(v1, 1.0 / n1);
    Vec4 v2 = mat4_vec(k.j, v1);
    Vec4 v3 = {dist(rng), dist(rng), dist(rng), dist(rng)};
    v3 = sub4(v3, scale4(v1, dot4(v3, v1)));
    v3 = sub4(v3, scale4(v2, dot4(v3, v2)));
    double n3 = norm4(v3);
    if (n3 < 1e-2) continue;
    v3 = scale4(v3, 1.0 / n3);
    Vec4 v4 = mat4_vec(k.j, v3);
    std::array<Vec4, 4> basis = {v1, v2, v3, v4};

    Ten4 rq{};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) {
            double s = 0.0;
            for (int p = 0; p < 4; ++p)
              for (int q = 0; q < 4; ++q)
                for (int u = 0; u < 4; ++u)
                  for (int w = 0; w < 4; ++w)
                    s += fc.r[p][q][u][w] * basis[a][p] * basis[b][q] *
                         basis[c][u] * basis[d][w];
            rq[a][b][c][d] = s;
          }
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        worst_pair1 = std::max(worst_pair1, std::abs(rq[i][j][0][2] - rq[i][j][1][3]));
        worst_pair2 = std::max(worst_pair2, std::abs(rq[i][j][0][3] + rq[i][j][1][2]));
      }
    double ric_v1 = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) ric_v1 += fc.ricci[a][b] * v1[a] * v1[b];
    double h = fc.pair(wedge_vectors(v1, v2), wedge_vectors(v1, v2));
    double bb = fc.pair(wedge_vectors(v1, v2), wedge_vectors(v3, v4));
    worst_ric = std::max(worst_ric, std::abs(ric_v1 - h - bb));
    if (einstein)
      worst_einstein = std::max(worst_einstein, std::abs(0.25 * fc.s - h - bb));
  }
  out.push_back({"R_ij13 = R_ij24", worst_pair1});
  out.push_back({"R_ij14 = -R_ij23", worst_pair2});
  out.push_back({"Ric(X,X) = H(X) + B(X,Y)", worst_ric});
  if (einstein) out.push_back({"s/4 = H(X) + B(X,Y)", worst_einstein});
  return out;
}

} // namespace weylpinch

#endif
