#ifndef WEYLPINCH_IDENTITIES_HPP
#define WEYLPINCH_IDENTITIES_HPP

#include <algorithm>
#include <cmath>
#include <string>

#include "weylpinch/errors.hpp"
#include "weylpinch/linalg.hpp"
#include "weylpinch/spectrum.hpp"

namespace weylpinch {

// -------------------------------------------------------------------
// Pure eigenvalue algebra: the quadratic-form machinery behind the
// pinching arguments, as total functions of sorted trace-free triples
// and auxiliary scalar magnitudes.
// -------------------------------------------------------------------

/// Sorted trace-free triple; the constructor re-centers and sorts.
struct LambdaTriple {
  Vec3 l{};

  LambdaTriple() = default;
  LambdaTriple(double a, double b, double c) {
    Vec3 v = {a, b, c};
    std::sort(v.begin(), v.end());
    double mean = (v[0] + v[1] + v[2]) / 3.0;
    l = {v[0] - mean, v[1] - mean, v[2] - mean};
  }
  double l1() const { return l[0]; }
  double l2() const { return l[1]; }
  double l3() const { return l[2]; }
  double norm_sq() const { return l[0] * l[0] + l[1] * l[1] + l[2] * l[2]; }
  double scale() const { return std::max(1.0, std::abs(l[0]) + std::abs(l[2])); }
};

struct PsiCoefficients {
  double a = 0.0; // 2 l2 (l3 - l2) + k (l2 - l3)^2
  double b = 0.0; // 2 l2 (l1 - l2) + k (l2 - l1)^2
  double c = 0.0; // k (l2 - l1)(l2 - l3)
};

/// Definitional coefficients of the quadratic form
/// Psi = A|a|^2 + B|c|^2 + 2C<a,c>. For k = 2/3 they also satisfy the
/// factored forms A = (2/3)(l3-l2)(2 l2 + l3),
/// B = -(2/3)(l2-l1)(2 l2 + l1), C = (2/3)(l2-l1)(l2-l3), which are
/// cross-checked to 1e-12 relative.
inline PsiCoefficients psi_coefficients(const LambdaTriple& t, double k) {
  double l1 = t.l1(), l2 = t.l2(), l3 = t.l3();
  PsiCoefficients out;
  out.a = 2.0 * l2 * (l3 - l2) + k * (l2 - l3) * (l2 - l3);
  out.b = 2.0 * l2 * (l1 - l2) + k * (l2 - l1) * (l2 - l1);
  out.c = k * (l2 - l1) * (l2 - l3);
  if (std::abs(k - 2.0 / 3.0) < 1e-15) {
    double fa = (2.0 / 3.0) * (l3 - l2) * (2.0 * l2 + l3);
    double fb = -(2.0 / 3.0) * (l2 - l1) * (2.0 * l2 + l1);
    double fcc = (2.0 / 3.0) * (l2 - l1) * (l2 - l3);
    double s2 = t.scale() * t.scale();
    if (std::abs(out.a - fa) > 1e-12 * std::max(1.0, s2) ||
        std::abs(out.b - fb) > 1e-12 * std::max(1.0, s2) ||
        std::abs(out.c - fcc) > 1e-12 * std::max(1.0, s2))
      throw InvalidArgument("psi_coefficients: factored forms disagree");
  }
  return out;
}

/// Inputs of the Psi quadratic: the triple, the squared magnitudes of
/// the two 1-form coefficients and their inner product (Cauchy-Schwarz
/// constrained), and the parameter k.
struct PsiInputs {
  LambdaTriple triple;
  double a_norm_sq = 0.0;
  double c_norm_sq = 0.0;
  double ac_inner = 0.0;
  double k = 2.0 / 3.0;

  PsiInputs(LambdaTriple t, double a2, double c2, double ac, double kk = 2.0 / 3.0)
      : triple(t), a_norm_sq(a2), c_norm_sq(c2), ac_inner(ac), k(kk) {
    if (a2 < 0.0 || c2 < 0.0)
      throw InvalidArgument("PsiInputs: squared norms must be nonnegative");
    double bound = std::sqrt(a2 * c2);
    if (std::abs(ac) > bound * (1.0 + 1e-12) + 1e-300)
      throw InvalidArgument("PsiInputs: |<a,c>| exceeds |a||c|");
  }
};

inline double psi_value(const PsiInputs& p) {
  PsiCoefficients c = psi_coefficients(p.triple, p.k);
  return c.a * p.a_norm_sq + c.b * p.c_norm_sq + 2.0 * c.c * p.ac_inner;
}

/// AB - C^2 for k = 2/3; identically zero on the trace-free locus.
inline double ab_minus_c2(const LambdaTriple& t) {
  PsiCoefficients c = psi_coefficients(t, 2.0 / 3.0);
  return c.a * c.b - c.c * c.c;
}

struct SignLemmaResult {
  double value = 0.0; // 2 l2^2 + 4 l1 l3 - l2 s / 2
  bool is_nonpositive = false;
  bool precondition_ok = true;
  bool equality_2l1_l3 = false; // 2 l1 + l3 = 0
  bool equality_l1_l3 = false;  // l1 + l3 = 0
  double chain_bound = 0.0;     // only for the s >= 0 lemma
};

/// Nonpositivity of 2 l2^2 + 4 l1 l3 - l2 s/2 under l1 + l3 >= 0 and
/// s <= 0, with the degeneracy flags of the equality case.
inline SignLemmaResult theorem15_sign_lemma(const LambdaTriple& t, double s) {
  SignLemmaResult r;
  double l1 = t.l1(), l2 = t.l2(), l3 = t.l3();
  double tol = 1e-12 * t.scale();
  r.precondition_ok = (l1 + l3 >= -tol) && (s <= tol);
  r.value = 2.0 * l2 * l2 + 4.0 * l1 * l3 - 0.5 * l2 * s;
  r.is_nonpositive = r.value <= 1e-12 * std::max(1.0, t.scale() * t.scale() +
                                                          std::abs(s) * t.scale());
  r.equality_2l1_l3 = std::abs(2.0 * l1 + l3) <= tol;
  r.equality_l1_l3 = std::abs(l1 + l3) <= tol;
  return r;
}

/// Nonpositivity of the same expression under l2 <= -s/12 and s >= 0,
/// with the intermediate chain bound -l2 (2 l2 + 4 l1 + s/2).
inline SignLemmaResult theorem16_sign_lemma(const LambdaTriple& t, double s) {
  SignLemmaResult r;
  double l1 = t.l1(), l2 = t.l2(), l3 = t.l3();
  double tol = 1e-12 * std::max(t.scale(), std::abs(s));
  r.precondition_ok = (l2 <= -s / 12.0 + tol) && (s >= -tol);
  r.value = 2.0 * l2 * l2 + 4.0 * l1 * l3 - 0.5 * l2 * s;
  r.chain_bound = -l2 * (2.0 * l2 + 4.0 * l1 + 0.5 * s);
  r.is_nonpositive = r.value <= 1e-12 * std::max(1.0, t.scale() * t.scale() +
                                                          std::abs(s) * t.scale());
  r.equality_2l1_l3 = std::abs(2.0 * l1 + l3) <= 1e-12 * t.scale();
  r.equality_l1_l3 = std::abs(l1 + l3) <= 1e-12 * t.scale();
  return r;
}

/// The zeroth-order part of the Laplacian of |W+|^2:
/// 36 det W+ - s |W+|^2. Zero for the Kahler spectrum
/// (-s/12, -s/12, s/6).
inline double weitzenboeck_gap(const Vec3& lambda, double s) {
  double det = lambda[0] * lambda[1] * lambda[2];
  double nsq = lambda[0] * lambda[0] + lambda[1] * lambda[1] + lambda[2] * lambda[2];
  return 36.0 * det - s * nsq;
}

inline double weitzenboeck_gap(const WeylSpectrum& ws, double s) {
  return 36.0 * ws.det_plus - s * ws.norm_sq_plus;
}

struct Theorem6Chain {
  bool precondition_ok = true; // -s/12 <= l1
  double norm_sq = 0.0;
  double identity_residual = 0.0; // |W|^2 - 2(l1^2 - l2 l3)
  bool link1 = false; // (1/sqrt6)|W| <= -l1
  bool link2 = false; // -l1 <= s/12
  bool link3 = false; // |W|^2 <= 6 l1^2
  bool equality_l1_eq_l2 = false;
  bool equality_l3_plus_2l1 = false;
};

/// The inequality chain (1/sqrt6)|W| <= -lambda1 <= s/12 together with
/// the identity |W|^2 = 2(lambda1^2 - lambda2 lambda3) and the equality
/// characterization of |W|^2 <= 6 lambda1^2.
inline Theorem6Chain theorem6_chain(const LambdaTriple& t, double s) {
  Theorem6Chain r;
  double l1 = t.l1(), l2 = t.l2(), l3 = t.l3();
  double tol = 1e-12 * std::max(1.0, t.scale());
  r.precondition_ok = (-s / 12.0 <= l1 + tol) && s > 0.0;
  r.norm_sq = t.norm_sq();
  r.identity_residual = std::abs(r.norm_sq - 2.0 * (l1 * l1 - l2 * l3));
  double norm = std::sqrt(r.norm_sq);
  double t2 = 1e-12 * std::max(1.0, t.scale() * t.scale());
  r.link1 = norm / std::sqrt(6.0) <= -l1 + tol;
  r.link2 = -l1 <= s / 12.0 + 1e-12 * std::max(1.0, std::abs(s));
  r.link3 = r.norm_sq <= 6.0 * l1 * l1 + t2;
  r.equality_l1_eq_l2 = std::abs(l1 - l2) <= tol;
  r.equality_l3_plus_2l1 = std::abs(l3 + 2.0 * l1) <= tol;
  return r;
}

/// Right-hand sides of the rough Laplacians of the three eigenvalues on
/// a harmonic-self-dual-Weyl background, as pure functions of the
/// spectrum, the scalar curvature and the squared connection-rate
/// magnitudes. They sum to zero identically, which is the algebraic
/// content of -Delta(Phi) = Delta(lambda2) for Phi = lambda1 + lambda3.
inline Vec3 eigenvalue_laplacian_rhs(const LambdaTriple& t, double s, double a2,
                                     double b2, double c2) {
  double l1 = t.l1(), l2 = t.l2(), l3 = t.l3();
  Vec3 out;
  out[0] = 2.0 * l1 * l1 + 4.0 * l2 * l3 - 0.5 * l1 * s +
           2.0 * (l3 - l1) * b2 + 2.0 * (l2 - l1) * c2;
  out[1] = 2.0 * l2 * l2 + 4.0 * l1 * l3 - 0.5 * l2 * s +
           2.0 * (l1 - l2) * c2 + 2.0 * (l3 - l2) * a2;
  out[2] = 2.0 * l3 * l3 + 4.0 * l1 * l2 - 0.5 * l3 * s +
           2.0 * (l1 - l3) * b2 + 2.0 * (l2 - l3) * a2;
  return out;
}

/// Boundary case of the zero-set argument: a triple with lambda2 = 0,
/// lambda1 + lambda3 = 0 and a degenerate spectrum (2 l1 + l3 = 0 or
/// l1 + 2 l3 = 0) is forced to vanish.
inline bool lemma6_zero_forced(const LambdaTriple& t, double tol = 1e-12) {
  double l1 = t.l1(), l2 = t.l2(), l3 = t.l3();
  double sc = t.scale();
  bool hyp = std::abs(l2) <= tol * sc && std::abs(l1 + l3) <= tol * sc &&
             (std::abs(2.0 * l1 + l3) <= tol * sc ||
              std::abs(l1 + 2.0 * l3) <= tol * sc);
  if (!hyp) return false;
  return std::abs(l1) <= 3.0 * tol * sc && std::abs(l3) <= 3.0 * tol * sc;
}

} // namespace weylpinch

#endif
