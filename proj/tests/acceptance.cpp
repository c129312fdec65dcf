// Acceptance suite: one test case per criterion, each printing a
// single PASS/FAIL line with its worst residual.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "test_util.hpp"
#include "weylpinch/identities.hpp"
#include "weylpinch/kahler.hpp"
#include "weylpinch/quadrature.hpp"
#include "weylpinch/report.hpp"
#include "weylpinch/verify.hpp"

using namespace weylpinch;
using testutil::Rational;

namespace {

struct Criterion {
  int number;
  const char* label;
  bool pass = true;
  double worst = 0.0;

  Criterion(int n, const char* l) : number(n), label(l) {}
  void gate(double residual, double tol) {
    worst = std::max(worst, residual);
    if (residual > tol) pass = false;
  }
  void require(bool ok) {
    if (!ok) pass = false;
  }
  ~Criterion() {
    std::printf("[criterion %2d] %-52s %s (worst residual %.3e)\n", number,
                label, pass ? "PASS" : "FAIL", worst);
    std::fflush(stdout);
  }
};

struct Analyzed {
  CurvaturePoint c;
  Frame f;
  FrameCurvature fc;
  WeylSpectrum ws;
};

Analyzed analyze(const ChartMetric& chart, const Vec4& x, int orientation = 1) {
  Analyzed a;
  a.c = curvature_at(chart, x);
  a.f = orthonormal_frame(a.c.metric, orientation);
  a.fc = frame_curvature(a.c, a.f);
  a.ws = spectrum(curvature_operator(a.fc));
  return a;
}

BuiltinModel model_of(const char* name, std::vector<double> params = {}) {
  return builtin_model_info(name, params);
}

Rational rational_ab_minus_c2(Rational l1, Rational l2, Rational l3) {
  Rational k(2, 3), two(2);
  Rational a = two * l2 * (l3 - l2) + k * (l2 - l3) * (l2 - l3);
  Rational b = two * l2 * (l1 - l2) + k * (l2 - l1) * (l2 - l1);
  Rational c = k * (l2 - l1) * (l2 - l3);
  return a * b - c * c;
}

} // namespace

TEST_CASE("criterion 1: Kahler self-dual spectrum is (-s/12, -s/12, s/6)") {
  Criterion cr(1, "Kahler W+ spectrum, 50 points per model, 1e-7 rel");
  struct Case { const char* name; std::vector<double> params; };
  const Case cases[] = {
      {"fubini_study_cp2", {1.0}},
      {"product_s2xs2", {1.0, 1.0}},
      {"product_s2xs2", {1.0, 2.0}},
      {"complex_hyperbolic_ch2", {1.0}},
  };
  for (const Case& cs : cases) {
    BuiltinModel model = model_of(cs.name, cs.params);
    auto rng = testutil::make_rng(fnv1a(cs.name) & 0xffffffffu);
    for (int trial = 0; trial < 50; ++trial) {
      Analyzed a = analyze(model.chart, sample_point(model, rng));
      double s = a.c.scalar;
      Vec3 expect = {-s / 12.0, -s / 12.0, s / 6.0};
      std::sort(expect.begin(), expect.end());
      double scale = std::max(std::abs(s) / 6.0, 1e-12);
      for (int k = 0; k < 3; ++k)
        cr.gate(std::abs(a.ws.lambda_plus[k] - expect[k]) / scale, 1e-7);
    }
  }
  CHECK(cr.pass);
}

TEST_CASE("criterion 2: holomorphic sectional and bisectional extrema") {
  Criterion cr(2, "H/B extrema vs W- spectrum, 1e-6");
  struct Case { const char* name; std::vector<double> params; bool einstein; };
  const Case cases[] = {
      {"fubini_study_cp2", {1.0}, true},
      {"product_s2xs2", {1.0, 1.0}, true},
      {"complex_hyperbolic_ch2", {1.0}, true},
      {"product_s2xs2", {1.0, 2.0}, false},
  };
  for (const Case& cs : cases) {
    BuiltinModel model = model_of(cs.name, cs.params);
    auto rng = testutil::make_rng((fnv1a(cs.name) >> 8) & 0xffffffffu);
    for (int trial = 0; trial < 6; ++trial) {
      Analyzed a = analyze(model.chart, sample_point(model, rng));
      KahlerStructure k = kahler_from_model(model, a.c.metric, a.f);
      CurvatureSamples s = extremize_curvatures(a.fc, k);
      double s6 = a.c.scalar / 6.0;
      if (cs.einstein) {
        cr.gate(std::abs(s.h_max - (s6 + 0.5 * a.ws.lambda_minus[2])), 1e-6);
        cr.gate(std::abs(s.h_min - (s6 + 0.5 * a.ws.lambda_minus[0])), 1e-6);
      }
      cr.gate(std::abs(s6 - a.ws.lambda_minus[2] - 2.0 * s.b_min), 1e-6);
      cr.gate(std::abs(s6 - a.ws.lambda_minus[0] - 2.0 * s.b_max), 1e-6);
      if (cs.einstein && cs.name[0] == 'p') {
        // unit product: (H_max, H_min, H_av) = (1, 1/2, 2/3)
        cr.gate(std::abs(s.h_max - 1.0), 1e-6);
        cr.gate(std::abs(s.h_min - 0.5), 1e-6);
        cr.gate(std::abs(s.h_av - 2.0 / 3.0), 1e-6);
      }
    }
  }
  CHECK(cr.pass);
}

TEST_CASE("criterion 3: Berger and Hall-Murphy sphere averages") {
  Criterion cr(3, "H_av = s/6 and H_av = (s+3s*)/24, 1e-10");
  struct Case { const char* name; std::vector<double> params; };
  const Case kahler_cases[] = {
      {"flat_t4", {}},
      {"fubini_study_cp2", {1.0}},
      {"product_s2xs2", {1.0, 1.0}},
      {"product_s2xs2", {1.0, 2.0}},
      {"complex_hyperbolic_ch2", {1.0}},
  };
  for (const Case& cs : kahler_cases) {
    BuiltinModel model = model_of(cs.name, cs.params);
    auto rng = testutil::make_rng((fnv1a(cs.name) >> 16) & 0xffffffffu);
    for (int trial = 0; trial < 20; ++trial) {
      Analyzed a = analyze(model.chart, sample_point(model, rng));
      KahlerStructure k = kahler_from_model(model, a.c.metric, a.f);
      SphereAverage av = sphere_average_h(a.fc, k);
      cr.gate(std::abs(av.h_av - a.c.scalar / 6.0), 1e-10);
    }
  }
  {
    BuiltinModel round = model_of("round_s4", {1.0});
    ChartMetric perturbed = parse_metric_spec(
        verify_detail::perturbed_metric_text(), "perturbed");
    auto rng = testutil::make_rng(0xbead5u);
    std::uniform_real_distribution<double> dist(0.0, 6.28);
    for (int trial = 0; trial < 20; ++trial) {
      Analyzed a = analyze(round.chart, sample_point(round, rng));
      SphereAverage av = sphere_average_h(a.fc, pointwise_frame_j());
      cr.gate(std::abs(av.h_av - av.hall_murphy_pred), 1e-10);
      Vec4 x = {dist(rng), dist(rng), dist(rng), dist(rng)};
      Analyzed b = analyze(perturbed, x);
      SphereAverage bv = sphere_average_h(b.fc, pointwise_frame_j());
      cr.gate(std::abs(bv.h_av - bv.hall_murphy_pred), 1e-10);
    }
  }
  CHECK(cr.pass);
}

TEST_CASE("criterion 4: biorthogonal extrema against both spectra") {
  Criterion cr(4, "K-perp extrema vs (l+ + l-)/2 formulas, 1e-6");
  struct Case { const char* name; std::vector<double> params; };
  const Case cases[] = {
      {"flat_t4", {}},
      {"fubini_study_cp2", {1.0}},
      {"product_s2xs2", {1.0, 1.0}},
      {"product_s2xs2", {1.0, 2.0}},
      {"complex_hyperbolic_ch2", {1.0}},
  };
  for (const Case& cs : cases) {
    BuiltinModel model = model_of(cs.name, cs.params);
    auto rng = testutil::make_rng((fnv1a(cs.name) >> 24) & 0xffffffffu);
    for (int trial = 0; trial < 4; ++trial) {
      Analyzed a = analyze(model.chart, sample_point(model, rng));
      KahlerStructure k = kahler_from_model(model, a.c.metric, a.f);
      CurvatureSamples s = extremize_curvatures(a.fc, k);
      Prop2Result r = verify_prop2(a.fc, a.ws, s);
      cr.gate(r.residual_max, 1e-6);
      cr.gate(r.residual_min, 1e-6);
      cr.require(r.min_le_half_bmin && r.max_ge_half_bmax);
    }
  }
  CHECK(cr.pass);
}

TEST_CASE("criterion 5: global invariants at quadrature order 32") {
  Criterion cr(5, "(tau, chi) table 1e-3; Kahler integral equality 1e-6");
  struct Case {
    const char* name;
    std::vector<double> params;
    double tau, chi;
    bool kahler;
  };
  const Case cases[] = {
      {"flat_t4", {}, 0.0, 0.0, false},
      {"round_s4", {1.0}, 0.0, 2.0, false},
      {"fubini_study_cp2", {1.0}, 1.0, 3.0, true},
      {"product_s2xs2", {1.0, 1.0}, 0.0, 4.0, true},
  };
  for (const Case& cs : cases) {
    BuiltinModel model = model_of(cs.name, cs.params);
    QuadratureAtlas atlas = atlas_for(model, 32);
    InvariantReport rep = integrate_invariants(model, atlas);
    cr.gate(std::abs(rep.tau - cs.tau), 1e-3);
    cr.gate(std::abs(rep.chi - cs.chi), 1e-3);
    if (cs.kahler) {
      GurskyLebrunComparison gl = gursky_lebrun_comparison(rep);
      cr.gate(std::abs(gl.gap) / std::max(1e-12, gl.int_s2_over_24), 1e-6);
    }
  }
  CHECK(cr.pass);
}

TEST_CASE("criterion 6: algebraic identity suite") {
  Criterion cr(6, "AB-C^2, Psi >= 0, |W|^2 identity, sign lemmas");
  auto rng = testutil::make_rng(0xabcdef1u);
  std::uniform_real_distribution<double> dist(-20.0, 20.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sneg(-30.0, 0.0);
  std::uniform_real_distribution<double> spos(0.0, 30.0);
  for (int trial = 0; trial < 100000; ++trial) {
    LambdaTriple t(dist(rng), dist(rng), dist(rng));
    double l3 = std::max(1.0, t.l3());
    cr.gate(std::abs(ab_minus_c2(t)) / (l3 * l3 * l3 * l3), 1e-10);
    cr.gate(std::abs(t.norm_sq() - 2.0 * (t.l1() * t.l1() - t.l2() * t.l3())) /
                std::max(1.0, t.norm_sq()),
            1e-12);
    LambdaTriple tc = (t.l1() + t.l3() >= 0.0)
                          ? t
                          : LambdaTriple(-t.l1(), -t.l2(), -t.l3());
    double a2 = 4.0 * unit(rng), c2 = 4.0 * unit(rng);
    double ac = (2.0 * unit(rng) - 1.0) * std::sqrt(a2 * c2);
    double psi = psi_value(PsiInputs(tc, a2, c2, ac));
    PsiCoefficients pc = psi_coefficients(tc, 2.0 / 3.0);
    double scale = std::max(1.0, std::abs(pc.a) * a2 + std::abs(pc.b) * c2 +
                                     2.0 * std::abs(pc.c) * std::sqrt(a2 * c2));
    cr.gate(-psi / scale, 1e-12);
    SignLemmaResult s15 = theorem15_sign_lemma(tc, sneg(rng));
    cr.require(s15.is_nonpositive);
    double s = spos(rng);
    if (tc.l2() <= -s / 12.0) {
      SignLemmaResult s16 = theorem16_sign_lemma(tc, s);
      cr.require(s16.is_nonpositive);
    }
    double sk = dist(rng);
    Vec3 kspec = {-sk / 12.0, -sk / 12.0, sk / 6.0};
    std::sort(kspec.begin(), kspec.end());
    cr.gate(std::abs(weitzenboeck_gap(kspec, sk)) /
                std::max(1.0, std::abs(sk * sk * sk)),
            1e-10);
  }
  // exact-rational spot checks: AB - C^2 and the |W|^2 identity are
  // polynomial identities, zero exactly and not merely small
  std::mt19937 irng(97u);
  std::uniform_int_distribution<long long> num(-12, 12);
  std::uniform_int_distribution<long long> den(1, 6);
  for (int done = 0; done < 100; ++done) {
    Rational a(num(irng), den(irng)), b(num(irng), den(irng));
    Rational c = Rational(0) - (a + b);
    auto val = [](const Rational& r) {
      return double(r.num) / double(r.den);
    };
    Rational v[3] = {a, b, c};
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (val(v[j]) < val(v[i])) std::swap(v[i], v[j]);
    cr.require(rational_ab_minus_c2(v[0], v[1], v[2]).is_zero());
    Rational two(2);
    Rational norm_sq = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    Rational rhs = two * (v[0] * v[0] - v[1] * v[2]);
    cr.require((norm_sq - rhs).is_zero());
  }
  CHECK(cr.pass);
}

TEST_CASE("criterion 7: constructive adapted frames, 1000 forms") {
  Criterion cr(7, "lemma1 reconstruction residual < 1e-9");
  KahlerStructure k = pointwise_frame_j();
  auto alphas = lambda_basis();
  auto rng = testutil::make_rng(0x777u);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  int done = 0;
  while (done < 1000) {
    Vec3 c = {dist(rng), dist(rng), dist(rng)};
    double n = norm3(c);
    if (n < 1e-3) continue;
    TwoForm phi{};
    for (int i = 0; i < 3; ++i)
      phi = phi + (std::sqrt(2.0) * c[i] / n) * alphas[3 + i];
    auto basis = lemma1_frame(phi, k);
    cr.gate(lemma1_residual(phi, basis), 1e-9);
    ++done;
  }
  CHECK(cr.pass);
}

TEST_CASE("criterion 8: pinching predicate equivalences") {
  Criterion cr(8, "det >= 0 <=> l1+l3 >= 0 <=> l2 <= 0; Polombo constants");
  auto rng = testutil::make_rng(0x888u);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int trial = 0; trial < 100000; ++trial) {
    double a = dist(rng), b = dist(rng);
    Vec3 lam = {a, b, -a - b};
    std::sort(lam.begin(), lam.end());
    double norm = std::sqrt(lam[0] * lam[0] + lam[1] * lam[1] + lam[2] * lam[2]);
    if (norm <= 1e-6) continue;
    bool det_nonneg = lam[0] * lam[1] * lam[2] >= 0.0;
    bool sum_nonneg = lam[0] + lam[2] >= 0.0;
    bool l2_nonpos = lam[1] <= 0.0;
    cr.require(det_nonneg == sum_nonneg);
    cr.require(sum_nonneg == l2_nonpos);
  }
  // hand-computed Polombo band cases at the quoted constants
  cr.gate(std::abs(kPolomboConstant - 1.0717967697244908), 1e-14);
  PinchReport inside = pinch_predicates({-1.0, -0.5, 1.5}, 0.0, 3.5);
  cr.require(inside.polombo_band); // 1.0718 <= 1.5 <= 2
  PinchReport boundary = pinch_predicates({-1.0, -1.0, 2.0}, 0.0, 6.0);
  cr.require(boundary.polombo_band && boundary.margins.polombo_hi == 0.0);
  PinchReport below = pinch_predicates({-1.0, 0.0, 1.0}, 0.0, 2.0);
  cr.require(!below.polombo_band); // 1 < 1.0718
  CHECK(cr.pass);
}

TEST_CASE("criterion 9: Einstein models in the harmonic-Weyl class") {
  Criterion cr(9, "ric0 coupling < 1e-8, |delta W+| < 1e-5, 20 points");
  struct Case { const char* name; std::vector<double> params; };
  const Case cases[] = {
      {"fubini_study_cp2", {1.0}},
      {"round_s4", {1.0}},
      {"product_s2xs2", {1.0, 1.0}},
  };
  for (const Case& cs : cases) {
    BuiltinModel model = model_of(cs.name, cs.params);
    auto rng = testutil::make_rng((fnv1a(cs.name) >> 4) & 0xffffffffu);
    for (int trial = 0; trial < 20; ++trial) {
      Vec4 x = sample_point(model, rng);
      Analyzed a = analyze(model.chart, x);
      OperatorBlocks ob = curvature_operator(a.fc);
      cr.gate(std::sqrt(frobenius_sq3(ob.ric0_block)), 1e-8);
      WeylPlusTensor wt = weyl_plus_at(model.chart, x, +1);
      cr.gate(wt.div_norm, 1e-5);
    }
  }
  CHECK(cr.pass);
}

TEST_CASE("criterion 10: determinism and backend cross-check") {
  Criterion cr(10, "byte-identical reports; hyperdual vs FD d2g 1e-6");
  // CLI byte determinism (timestamp line excluded by contract)
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  auto strip = [](const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
      if (line.find("\"timestamp\"") == std::string::npos) out << line << "\n";
    return out.str();
  };
  std::string base = std::string(WEYLPINCH_CLI_PATH) +
                     " analyze --model product_s2xs2 --params 1,2 "
                     "--suites spectra,pinch,kahler,identities --grid 2x2x2x2 "
                     "--output ";
  std::string o1 = "/tmp/weylpinch_acc_rep1.json";
  std::string o2 = "/tmp/weylpinch_acc_rep2.json";
  int rc1 = std::system((base + o1 + " > /dev/null 2>&1").c_str());
  int rc2 = std::system((base + o2 + " > /dev/null 2>&1").c_str());
  cr.require(WEXITSTATUS(rc1) == 0 && WEXITSTATUS(rc2) == 0);
  cr.require(strip(slurp(o1)) == strip(slurp(o2)));
  cr.require(!strip(slurp(o1)).empty());

  // backend agreement across the catalog
  struct Case { const char* name; std::vector<double> params; };
  const Case cases[] = {
      {"flat_t4", {}},
      {"round_s4", {1.0}},
      {"fubini_study_cp2", {1.0}},
      {"product_s2xs2", {1.0, 2.0}},
      {"complex_hyperbolic_ch2", {1.0}},
  };
  for (const Case& cs : cases) {
    BuiltinModel model = model_of(cs.name, cs.params);
    auto rng = testutil::make_rng(0x1010u);
    for (int trial = 0; trial < 5; ++trial) {
      Vec4 x = sample_point(model, rng);
      model.chart.backend = DerivativeBackend::hyperdual;
      MetricValue vh = metric_at(model.chart, x);
      model.chart.backend = DerivativeBackend::finite_difference;
      MetricValue vf = metric_at(model.chart, x);
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
              cr.gate(std::abs(vh.d2g[k][l][i][j] - vf.d2g[k][l][i][j]) /
                          std::max(1.0, std::abs(vh.d2g[k][l][i][j])),
                      1e-6);
    }
  }
  CHECK(cr.pass);
}
