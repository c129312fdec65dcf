#include "doctest.h"

#include <cmath>

#include "test_util.hpp"
#include "weylpinch/curvature.hpp"
#include "weylpinch/models.hpp"
#include "weylpinch/verify.hpp"

using namespace weylpinch;

namespace {

// Closed-form Christoffels of a diagonal metric g_ii = f_i(x):
//   G^k_ii = -d_k f_i / (2 f_k)   (k != i)
//   G^i_ij = d_j f_i / (2 f_i)
Ten3 diagonal_christoffel_oracle(const Vec4& f, const Mat4& df) {
  Ten3 g{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      if (k != i) g[k][i][i] = -df[k][i] / (2.0 * f[k]);
      g[i][i][k] = g[i][k][i] = df[k][i] / (2.0 * f[i]);
    }
  return g;
}

// double-spherical chart of the radius-r sphere:
// g = r^2 diag(1, cos^2 eta, cos^2 eta sin^2 theta, sin^2 eta)
void sphere_diag(const Vec4& x, double r, Vec4& f, Mat4& df) {
  double se = std::sin(x[0]), ce = std::cos(x[0]);
  double st = std::sin(x[1]), ct = std::cos(x[1]);
  double r2 = r * r;
  f = {r2, r2 * ce * ce, r2 * ce * ce * st * st, r2 * se * se};
  df = Mat4{};
  df[0][1] = -2.0 * r2 * ce * se;
  df[0][2] = -2.0 * r2 * ce * se * st * st;
  df[1][2] = 2.0 * r2 * ce * ce * st * ct;
  df[0][3] = 2.0 * r2 * se * ce;
}

double rel(double a, double b, double scale) {
  return std::abs(a - b) / std::max(1.0, scale);
}

void check_tensor_invariants(const CurvaturePoint& c) {
  double rmax = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          rmax = std::max(rmax, std::abs(c.riemann[i][j][k][l]));
  double tol = 1e-9 * std::max(1.0, rmax);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double r = c.riemann[i][j][k][l];
          CHECK(std::abs(r + c.riemann[j][i][k][l]) < tol);
          CHECK(std::abs(r + c.riemann[i][j][l][k]) < tol);
          CHECK(std::abs(r - c.riemann[k][l][i][j]) < tol);
          // first Bianchi, cyclic in the last three slots
          CHECK(std::abs(r + c.riemann[i][k][l][j] + c.riemann[i][l][j][k]) < tol);
        }
  // traceless Ricci is traceless
  double tr = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) tr += c.metric.g_inv[i][j] * c.ric0[i][j];
  CHECK(std::abs(tr) < 1e-10 * std::max(1.0, std::abs(c.scalar)));
  // Weyl is totally trace-free
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l) {
      double t = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
          t += c.metric.g_inv[i][k] * c.weyl[i][j][k][l];
      CHECK(std::abs(t) < tol);
    }
  // metric compatibility of the connection
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double nabla_g = c.metric.dg[k][i][j];
        for (int m = 0; m < 4; ++m)
          nabla_g -= c.gamma[m][k][i] * c.metric.g[m][j] +
                     c.gamma[m][k][j] * c.metric.g[i][m];
        CHECK(std::abs(nabla_g) < 1e-10 * std::max(1.0, mat4_max_abs(c.metric.g)));
      }
}

} // namespace

TEST_CASE("flat torus: everything vanishes") {
  BuiltinModel flat = builtin_model_info("flat_t4");
  CurvaturePoint c = curvature_at(flat.chart, {0.3, 5.0, 2.0, 1.0});
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(c.gamma[k][i][j] == 0.0);
  CHECK(c.scalar == 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) CHECK(c.riemann[i][j][k][l] == 0.0);
}

TEST_CASE("round sphere matches the closed-form Christoffel oracle") {
  BuiltinModel round = builtin_model_info("round_s4", std::vector<double>{1.3});
  auto rng = testutil::make_rng(31u);
  for (int trial = 0; trial < 5; ++trial) {
    Vec4 x = sample_point(round, rng);
    CurvaturePoint c = curvature_at(round.chart, x);
    Vec4 f;
    Mat4 df;
    sphere_diag(x, 1.3, f, df);
    Ten3 oracle = diagonal_christoffel_oracle(f, df);
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          CHECK(rel(c.gamma[k][i][j], oracle[k][i][j], 10.0) < 1e-9);
  }
}

TEST_CASE("round sphere matches the constant-curvature oracle") {
  for (double r : {1.0, 2.0}) {
    BuiltinModel round = builtin_model_info("round_s4", std::vector<double>{r});
    auto rng = testutil::make_rng(32u);
    double kappa = 1.0 / (r * r);
    for (int trial = 0; trial < 5; ++trial) {
      Vec4 x = sample_point(round, rng);
      CurvaturePoint c = curvature_at(round.chart, x);
      CHECK(std::abs(c.scalar - 12.0 * kappa) < 1e-8);
      double gmax = mat4_max_abs(c.metric.g);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          CHECK(std::abs(c.ric0[i][j]) < 1e-9 * std::max(1.0, gmax));
          for (int k = 0; k < 4; ++k)
            for (int l = 0; l < 4; ++l) {
              double oracle = kappa * (c.metric.g[i][k] * c.metric.g[j][l] -
                                       c.metric.g[i][l] * c.metric.g[j][k]);
              CHECK(rel(c.riemann[i][j][k][l], oracle, gmax * gmax) < 1e-9);
              CHECK(std::abs(c.weyl[i][j][k][l]) < 1e-9 * std::max(1.0, gmax * gmax));
            }
        }
      check_tensor_invariants(c);
    }
  }
}

TEST_CASE("product metric: block Christoffels and factor scalars") {
  BuiltinModel prod = builtin_model_info("product_s2xs2", std::vector<double>{1.0, 2.0});
  auto rng = testutil::make_rng(33u);
  Vec4 x = sample_point(prod, rng);
  CurvaturePoint c = curvature_at(prod.chart, x);
  // no mixing between the factors
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        bool kf = k < 2, if_ = i < 2, jf = j < 2;
        if (kf != if_ || kf != jf) CHECK(std::abs(c.gamma[k][i][j]) < 1e-12);
      }
  CHECK(std::abs(c.scalar - 2.5) < 1e-9); // 2/r1^2 + 2/r2^2
  check_tensor_invariants(c);

  // independent oracle for the full Riemann tensor of a product of
  // constant-curvature surfaces: each factor contributes
  // K_p (g_ik g_jl - g_il g_jk) on its own block, no cross terms
  auto factor_of = [](int i) { return i < 2 ? 0 : 1; };
  const double kappa[2] = {1.0, 0.25};
  double gscale = mat4_max_abs(c.metric.g);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double oracle = 0.0;
          if (factor_of(i) == factor_of(j) && factor_of(j) == factor_of(k) &&
              factor_of(k) == factor_of(l))
            oracle = kappa[factor_of(i)] *
                     (c.metric.g[i][k] * c.metric.g[j][l] -
                      c.metric.g[i][l] * c.metric.g[j][k]);
          CHECK(std::abs(c.riemann[i][j][k][l] - oracle) <
                1e-9 * std::max(1.0, gscale * gscale));
        }

  BuiltinModel unit = builtin_model_info("product_s2xs2", std::vector<double>{1.0, 1.0});
  CurvaturePoint cu = curvature_at(unit.chart, sample_point(unit, rng));
  CHECK(std::abs(cu.scalar - 4.0) < 1e-9);
  double gmax = mat4_max_abs(cu.metric.g);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(std::abs(cu.ric0[i][j]) < 1e-9 * std::max(1.0, gmax)); // Einstein
}

TEST_CASE("Fubini-Study is Einstein with constant scalar curvature") {
  for (double scale : {1.0, 2.0}) {
    BuiltinModel fs = builtin_model_info("fubini_study_cp2", std::vector<double>{scale});
    auto rng = testutil::make_rng(34u);
    double expected_s = 12.0 / (scale * scale);
    for (int trial = 0; trial < (scale == 1.0 ? 50 : 10); ++trial) {
      Vec4 x = sample_point(fs, rng);
      CurvaturePoint c = curvature_at(fs.chart, x);
      CHECK(std::abs(c.scalar - expected_s) < 1e-7 * std::max(1.0, expected_s));
      double gmax = std::max(1.0, mat4_max_abs(c.metric.g));
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          CHECK(std::abs(c.ric0[i][j]) < 1e-8 * gmax);
    }
  }
}

TEST_CASE("complex hyperbolic plane is Einstein with s = -12/scale^2") {
  BuiltinModel ch2 = builtin_model_info("complex_hyperbolic_ch2", std::vector<double>{1.0});
  auto rng = testutil::make_rng(35u);
  for (int trial = 0; trial < 10; ++trial) {
    Vec4 x = sample_point(ch2, rng);
    CurvaturePoint c = curvature_at(ch2.chart, x);
    CHECK(std::abs(c.scalar + 12.0) < 1e-7);
    double gmax = std::max(1.0, mat4_max_abs(c.metric.g));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(std::abs(c.ric0[i][j]) < 1e-8 * gmax);
  }
}

TEST_CASE("generic metric: full symmetry and trace invariants") {
  ChartMetric chart = parse_metric_spec(
      weylpinch::verify_detail::perturbed_metric_text(), "perturbed");
  auto rng = testutil::make_rng(36u);
  std::uniform_real_distribution<double> dist(0.0, 6.28);
  for (int trial = 0; trial < 5; ++trial) {
    Vec4 x = {dist(rng), dist(rng), dist(rng), dist(rng)};
    CurvaturePoint c = curvature_at(chart, x);
    check_tensor_invariants(c);
  }
}

TEST_CASE("self-dual Weyl part: duality, reconstruction, orientation swap") {
  ChartMetric chart = parse_metric_spec(
      weylpinch::verify_detail::perturbed_metric_text(), "perturbed");
  CurvaturePoint c = curvature_at(chart, {1.1, 2.3, 0.7, 4.0});
  Ten4 wp = weyl_dual_part(c, +1, +1);
  Ten4 wm = weyl_dual_part(c, +1, -1);
  Ten4 swp = detail::star_second_pair(wp, c.metric.g_inv, c.metric.sqrt_det_g, +1);
  double wmax = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) wmax = std::max(wmax, std::abs(c.weyl[i][j][k][l]));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          CHECK(std::abs(swp[i][j][k][l] - wp[i][j][k][l]) < 1e-9 * std::max(1.0, wmax));
          CHECK(std::abs(wp[i][j][k][l] + wm[i][j][k][l] - c.weyl[i][j][k][l]) <
                1e-9 * std::max(1.0, wmax));
        }
  // orientation reversal exchanges the two parts exactly
  Ten4 wp_rev = weyl_dual_part(c, -1, +1);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          CHECK(wp_rev[i][j][k][l] == wm[i][j][k][l]);
}

TEST_CASE("symmetric-space models have harmonic self-dual Weyl curvature") {
  struct Case { const char* name; std::vector<double> params; int points; };
  const Case cases[] = {
      {"round_s4", {1.0}, 4},
      {"fubini_study_cp2", {1.0}, 20},
      {"product_s2xs2", {1.0, 1.0}, 4},
  };
  for (const Case& cs : cases) {
    BuiltinModel model = builtin_model_info(cs.name, cs.params);
    auto rng = testutil::make_rng(37u);
    for (int trial = 0; trial < cs.points; ++trial) {
      Vec4 x = sample_point(model, rng);
      WeylPlusTensor wt = weyl_plus_at(model.chart, x, +1);
      CHECK(wt.grad_norm_sq > -1e-9);
      CHECK(wt.grad_norm_sq < 1e-6);
      CHECK(wt.div_norm < 1e-5);
    }
  }
}

TEST_CASE("round sphere has vanishing self-dual Weyl part") {
  BuiltinModel round = builtin_model_info("round_s4", std::vector<double>{1.0});
  WeylPlusTensor wt = weyl_plus_at(round.chart, {1.3, 1.5, 1.2, 2.0}, +1);
  double wmax = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) wmax = std::max(wmax, std::abs(wt.wplus[i][j][k][l]));
  CHECK(wmax < 1e-9);
  CHECK(wt.div_norm < 1e-6);
}
