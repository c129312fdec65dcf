#ifndef WEYLPINCH_SPECTRUM_HPP
#define WEYLPINCH_SPECTRUM_HPP

#include <cmath>
#include <string>
#include <vector>

#include "weylpinch/forms.hpp"
#include "weylpinch/linalg.hpp"

namespace weylpinch {

/// Sorted spectra of the W± blocks with derived scalars. Eigenforms are
/// unit 2-forms in the frame basis.
struct WeylSpectrum {
  Vec3 lambda_plus{};
  Vec3 lambda_minus{};
  double norm_sq_plus = 0.0;  // |W+|^2 = sum lambda_i^2
  double norm_sq_minus = 0.0;
  double det_plus = 0.0;
  double det_minus = 0.0;
  std::array<TwoForm, 3> eigenforms_plus{};
  std::array<TwoForm, 3> eigenforms_minus{};
  bool degenerate_plus = false;
  bool degenerate_minus = false;
};

inline WeylSpectrum spectrum(const OperatorBlocks& ob) {
  WeylSpectrum ws;
  auto alphas = lambda_basis();
  auto fill = [&](const Mat3& block, Vec3& lam, double& nsq, double& det,
                  std::array<TwoForm, 3>& forms, bool& degen, int alpha_off) {
    Eigen3 e = eigen3_sym(block);
    lam = e.values;
    nsq = lam[0] * lam[0] + lam[1] * lam[1] + lam[2] * lam[2];
    det = lam[0] * lam[1] * lam[2];
    double tol = 1e-7 * std::max(1.0, std::sqrt(nsq));
    degen = (lam[1] - lam[0] < tol) || (lam[2] - lam[1] < tol);
    for (int k = 0; k < 3; ++k) {
      TwoForm w{};
      for (int i = 0; i < 3; ++i)
        w = w + e.vectors[k][i] * alphas[alpha_off + i];
      forms[k] = w;
    }
  };
  fill(ob.wplus, ws.lambda_plus, ws.norm_sq_plus, ws.det_plus,
       ws.eigenforms_plus, ws.degenerate_plus, 0);
  fill(ob.wminus, ws.lambda_minus, ws.norm_sq_minus, ws.det_minus,
       ws.eigenforms_minus, ws.degenerate_minus, 3);
  return ws;
}

/// Pointwise pinching predicates on the W+ spectrum.
///   det_nonneg:   det W+ >= 0
///   sum13_nonneg: lambda_1 + lambda_3 >= 0 (equivalent on |W| > 0)
///   polombo_band: -8(1 - sqrt3/2) lambda_1 <= lambda_3 <= -2 lambda_1
///   gursky_band:  s/12 <= lambda_1 + lambda_3
struct PinchReport {
  bool det_nonneg = false;
  bool sum13_nonneg = false;
  bool polombo_band = false;
  bool gursky_band = false;
  int lambda2_sign = 0;
  struct Margins {
    double det = 0.0;
    double sum13 = 0.0;
    double polombo_lo = 0.0; // lambda_3 + 8(1 - sqrt3/2) lambda_1
    double polombo_hi = 0.0; // -2 lambda_1 - lambda_3
    double gursky = 0.0;     // lambda_1 + lambda_3 - s/12
  } margins;
};

constexpr double kPolomboConstant = 8.0 * (1.0 - 0.86602540378443864676); // 8(1 - sqrt3/2)

inline PinchReport pinch_predicates(const Vec3& lambda, double s,
                                    double norm_sq) {
  PinchReport r;
  double l1 = lambda[0], l2 = lambda[1], l3 = lambda[2];
  r.margins.det = l1 * l2 * l3;
  r.margins.sum13 = l1 + l3;
  r.margins.polombo_lo = l3 + kPolomboConstant * l1;
  r.margins.polombo_hi = -2.0 * l1 - l3;
  r.margins.gursky = l1 + l3 - s / 12.0;
  r.det_nonneg = r.margins.det >= 0.0;
  r.sum13_nonneg = r.margins.sum13 >= 0.0;
  r.polombo_band = r.margins.polombo_lo >= 0.0 && r.margins.polombo_hi >= 0.0;
  r.gursky_band = r.margins.gursky >= 0.0;
  double scale = std::max(1e-300, std::sqrt(norm_sq));
  r.lambda2_sign = (std::abs(l2) <= 1e-12 * scale) ? 0 : (l2 < 0.0 ? -1 : 1);
  return r;
}

inline PinchReport pinch_predicates(const WeylSpectrum& ws, double s) {
  return pinch_predicates(ws.lambda_plus, s, ws.norm_sq_plus);
}

/// Thresholded membership in the zero set of W+: the Frobenius norm of
/// the block falls below 1e-8 relative to the overall curvature scale.
inline bool in_weyl_plus_zero_set(const WeylSpectrum& ws, double riemann_scale) {
  return std::sqrt(ws.norm_sq_plus) < 1e-8 * std::max(1.0, riemann_scale);
}

/// One evaluated inequality with its slack (rhs - lhs >= 0 when it holds).
struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = false;
  bool equality_case = false;
};

/// Pointwise spectral inequalities of a sorted trace-free triple:
///   (1/sqrt6)|W| <= lambda_3,   (1/sqrt6)|W| <= -lambda_1,
///   |W|^2 = 2(lambda_1^2 - lambda_2 lambda_3)   (identity),
///   |W|^2 <= 6 lambda_1^2, equality iff lambda_1 = lambda_2 and
///   lambda_3 + 2 lambda_1 = 0.
inline std::vector<InequalityCheck> spectral_inequalities(const Vec3& lambda) {
  double l1 = lambda[0], l2 = lambda[1], l3 = lambda[2];
  double nsq = l1 * l1 + l2 * l2 + l3 * l3;
  double norm = std::sqrt(nsq);
  double scale = std::max(1.0, nsq);
  const double inv_sqrt6 = 1.0 / std::sqrt(6.0);
  std::vector<InequalityCheck> out;
  auto push = [&](std::string name, double lhs, double rhs, bool eq) {
    InequalityCheck c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.slack = rhs - lhs;
    c.holds = c.slack >= -1e-12 * scale;
    c.equality_case = eq;
    out.push_back(std::move(c));
  };
  push("|W|/sqrt6 <= lambda3", inv_sqrt6 * norm, l3,
       std::abs(inv_sqrt6 * norm - l3) <= 1e-12 * std::max(1.0, norm));
  push("|W|/sqrt6 <= -lambda1", inv_sqrt6 * norm, -l1,
       std::abs(inv_sqrt6 * norm + l1) <= 1e-12 * std::max(1.0, norm));
  {
    InequalityCheck c;
    c.name = "|W|^2 = 2(lambda1^2 - lambda2*lambda3)";
    c.lhs = nsq;
    c.rhs = 2.0 * (l1 * l1 - l2 * l3);
    c.slack = c.rhs - c.lhs;
    c.holds = std::abs(c.slack) <= 1e-12 * scale;
    c.equality_case = true;
    out.push_back(std::move(c));
  }
  bool eq6 = std::abs(l1 - l2) <= 1e-9 * std::max(1.0, norm) &&
             std::abs(l3 + 2.0 * l1) <= 1e-9 * std::max(1.0, norm);
  push("|W|^2 <= 6 lambda1^2", nsq, 6.0 * l1 * l1, eq6);
  return out;
}

} // namespace weylpinch

#endif
