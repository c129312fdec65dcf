#ifndef WEYLPINCH_VERIFY_HPP
#define WEYLPINCH_VERIFY_HPP

#include <random>
#include <string>
#include <vector>

#include "weylpinch/identities.hpp"
#include "weylpinch/kahler.hpp"
#include "weylpinch/quadrature.hpp"
#include "weylpinch/report.hpp"

namespace weylpinch {

// -------------------------------------------------------------------
// Named verification suites behind `weylpinch verify`. Each check prints
// the identity under test and its worst residual. Suites:
//   all lemma1 lemma2 lemma3 prop2 berger hall_murphy psi weitzenboeck
//   signature chi
// -------------------------------------------------------------------

struct VerifyCheck {
  std::string label;
  double worst = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyResult {
  std::vector<VerifyCheck> checks;
  bool pass = true;

  void add(std::string label, double worst, double tol) {
    bool ok = worst <= tol;
    checks.push_back({std::move(label), worst, tol, ok});
    pass = pass && ok;
  }
  void add_flag(std::string label, bool ok) {
    checks.push_back({std::move(label), ok ? 0.0 : 1.0, 0.0, ok});
    pass = pass && ok;
  }
};

namespace verify_detail {

// generic analytic test metric (periodic, SPD, no special holonomy)
inline const char* perturbed_metric_text() {
  return R"(coords: x1 x2 x3 x4
domain: x1 periodic 2*pi
domain: x2 periodic 2*pi
domain: x3 periodic 2*pi
domain: x4 periodic 2*pi
g[1][1] = 1 + 0.2*sin(x1)*cos(x2)
g[2][2] = 1 + 0.2*sin(x2)*sin(x3)
g[3][3] = 1 + 0.2*cos(x3)*sin(x4)
g[4][4] = 1 + 0.2*cos(x1)*cos(x4)
g[1][2] = 0.1*sin(x3)
g[3][4] = 0.1*cos(x2)
g[1][3] = 0.05*sin(x4)*cos(x1)
)";
}

struct ModelPoint {
  CurvaturePoint c;
  Frame f;
  FrameCurvature fc;
  OperatorBlocks ob;
  WeylSpectrum ws;
};

inline ModelPoint analyze_point(const ChartMetric& chart, const Vec4& x,
                                int orientation = +1) {
  ModelPoint mp;
  mp.c = curvature_at(chart, x);
  mp.f = orthonormal_frame(mp.c.metric, orientation);
  mp.fc = frame_curvature(mp.c, mp.f);
  mp.ob = curvature_operator(mp.fc);
  mp.ws = spectrum(mp.ob);
  return mp;
}

template <class Fn>
void for_sample_points(const BuiltinModel& model, int count, uint64_t seed,
                       const Fn& fn) {
  std::mt19937 rng(static_cast<uint32_t>(seed));
  for (int i = 0; i < count; ++i) fn(sample_point(model, rng));
}

} // namespace verify_detail

inline VerifyResult verify_lemma1(int count = 1000) {
  VerifyResult out;
  KahlerStructure k = pointwise_frame_j();
  auto alphas = lambda_basis();
  std::mt19937 rng(7121u);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst = 0.0, worst_ortho = 0.0;
  int done = 0;
  while (done < count) {
    Vec3 c = {dist(rng), dist(rng), dist(rng)};
    double n = norm3(c);
    if (n < 1e-3) continue;
    TwoForm phi{};
    for (int i = 0; i < 3; ++i)
      phi = phi + (std::sqrt(2.0) * c[i] / n) * alphas[3 + i];
    auto basis = lemma1_frame(phi, k);
    worst = std::max(worst, lemma1_residual(phi, basis));
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        double d = dot4(basis[a], basis[b]) - (a == b ? 1.0 : 0.0);
        worst_ortho = std::max(worst_ortho, std::abs(d));
      }
    ++done;
  }
  out.add("phi = E1^JE1 - E3^JE3 reconstruction (" + std::to_string(count) +
              " random anti-self-dual forms, |phi| = sqrt2)",
          worst, 1e-9);
  out.add("orthonormality of the constructed basis", worst_ortho, 1e-10);
  return out;
}

inline VerifyResult verify_lemma2_suite() {
  VerifyResult out;
  struct Case { const char* name; std::vector<double> params; double tol; };
  const Case cases[] = {
      {"product_s2xs2", {1.0, 2.0}, 1e-6},
      {"fubini_study_cp2", {1.0}, 1e-8},
  };
  for (const Case& cs : cases) {
    BuiltinModel model = builtin_model_info(cs.name, cs.params);
    double worst = 0.0, worst_bridge = 0.0;
    verify_detail::for_sample_points(model, 4, fnv1a(cs.name) ^ 2u, [&](const Vec4& x) {
      auto mp = verify_detail::analyze_point(model.chart, x);
      KahlerStructure k = kahler_from_model(model, mp.c.metric, mp.f);
      CurvatureSamples samples = extremize_curvatures(mp.fc, k);
      Lemma2Result r = verify_lemma2(mp.fc, k, mp.ws, samples);
      worst = std::max({worst, r.residual_min, r.residual_max});
      worst_bridge = std::max(worst_bridge, r.bridge_worst);
    });
    out.add(std::string("s/6 - lambda3 = 2*B_min, s/6 - lambda1 = 2*B_max on ") +
                cs.name,
            worst, cs.tol);
    out.add(std::string("(s/6 - W^-)(phi,phi) = 4*B(E1,E3) on ") + cs.name,
            worst_bridge, 1e-8);
  }
  return out;
}

inline VerifyResult verify_lemma3_suite() {
  VerifyResult out;
  struct Case { const char* name; std::vector<double> params; };
  const Case cases[] = {
      {"fubini_study_cp2", {1.0}},
      {"product_s2xs2", {1.0, 1.0}},
      {"complex_hyperbolic_ch2", {1.0}},
  };
  for (const Case& cs : cases) {
    BuiltinModel model = builtin_model_info(cs.name, cs.params);
    double worst = 0.0;
    verify_detail::for_sample_points(model, 4, fnv1a(cs.name) ^ 3u, [&](const Vec4& x) {
      auto mp = verify_detail::analyze_point(model.chart, x);
      KahlerStructure k = kahler_from_model(model, mp.c.metric, mp.f);
      CurvatureSamples s = extremize_curvatures(mp.fc, k);
      double s6 = mp.c.scalar / 6.0;
      worst = std::max(worst,
                       std::abs(s.h_max - (s6 + 0.5 * mp.ws.lambda_minus[2])));
      worst = std::max(worst,
                       std::abs(s.h_min - (s6 + 0.5 * mp.ws.lambda_minus[0])));
    });
    out.add(std::string("H_max = s/6 + lambda3/2, H_min = s/6 + lambda1/2 on ") +
                cs.name,
            worst, 1e-6);
  }
  {
    // the unit product has (H_max, H_min, H_av) = (1, 1/2, 2/3)
    BuiltinModel model = builtin_model_info("product_s2xs2", std::vector<double>{1.0, 1.0});
    double worst = 0.0;
    verify_detail::for_sample_points(model, 3, 77u, [&](const Vec4& x) {
      auto mp = verify_detail::analyze_point(model.chart, x);
      KahlerStructure k = kahler_from_model(model, mp.c.metric, mp.f);
      CurvatureSamples s = extremize_curvatures(mp.fc, k);
      worst = std::max({worst, std::abs(s.h_max - 1.0),
                        std::abs(s.h_min - 0.5), std::abs(s.h_av - 2.0 / 3.0)});
    });
    out.add("product_s2xs2(1,1): (H_max, H_min, H_av) = (1, 1/2, 2/3)", worst,
            1e-6);
  }
  return out;
}

inline VerifyResult verify_prop2_suite() {
  VerifyResult out;
  struct Case { const char* name; std::vector<double> params; };
  const Case cases[] = {
      {"fubini_study_cp2", {1.0}},
      {"product_s2xs2", {1.0, 1.0}},
      {"product_s2xs2", {1.0, 2.0}},
      {"complex_hyperbolic_ch2", {1.0}},
  };
  for (const Case& cs : cases) {
    BuiltinModel model = builtin_model_info(cs.name, cs.params);
    double worst = 0.0;
    bool cond_ok = true;
    verify_detail::for_sample_points(model, 3, fnv1a(cs.name) ^ 5u, [&](const Vec4& x) {
      auto mp = verify_detail::analyze_point(model.chart, x);
      KahlerStructure k = kahler_from_model(model, mp.c.metric, mp.f);
      CurvatureSamples s = extremize_curvatures(mp.fc, k);
      Prop2Result r = verify_prop2(mp.fc, mp.ws, s);
      worst = std::max({worst, r.residual_max, r.residual_min});
      cond_ok = cond_ok && r.min_le_half_bmin && r.max_ge_half_bmax;
    });
    std::string label = std::string("K_max - s/12 = (l3+ + l3-)/2 and min analogue on ") +
                        cs.name + (cs.params.size() > 1 && cs.params[1] == 2.0 ? "(1,2)" : "");
    out.add(label, worst, 1e-6);
    out.add_flag(std::string("sign-conditional K vs B/2 comparison on ") + cs.name,
                 cond_ok);
  }
  return out;
}

inline VerifyResult verify_berger_suite(int points_per_model = 50) {
  VerifyResult out;
  struct Case { const char* name; std::vector<double> params; };
  const Case cases[] = {
      {"flat_t4", {}},
      {"fubini_study_cp2", {1.0}},
      {"product_s2xs2", {1.0, 1.0}},
      {"product_s2xs2", {1.0, 2.0}},
      {"complex_hyperbolic_ch2", {1.0}},
  };
  for (const Case& cs : cases) {
    BuiltinModel model = builtin_model_info(cs.name, cs.params);
    double worst = 0.0, worst_star = 0.0;
    verify_detail::for_sample_points(model, points_per_model, fnv1a(cs.name) ^ 7u,
                                     [&](const Vec4& x) {
      auto mp = verify_detail::analyze_point(model.chart, x);
      KahlerStructure k = kahler_from_model(model, mp.c.metric, mp.f);
      SphereAverage av = sphere_average_h(mp.fc, k);
      double sc = std::max(1.0, std::abs(mp.c.scalar));
      worst = std::max(worst, std::abs(av.h_av - av.berger_pred) / sc);
      worst_star = std::max(worst_star, std::abs(av.s_star - mp.c.scalar) / sc);
    });
    out.add(std::string("H_av = s/6 (degree-4 exact sphere quadrature) on ") + cs.name,
            worst, 1e-10);
    out.add(std::string("s* = 2R(omega,omega) = s on ") + cs.name, worst_star,
            1e-9);
  }
  return out;
}

inline VerifyResult verify_hall_murphy_suite(int points_per_model = 20) {
  VerifyResult out;
  {
    BuiltinModel model = builtin_model_info("round_s4", std::vector<double>{1.0});
    double worst = 0.0;
    verify_detail::for_sample_points(model, points_per_model, 11u, [&](const Vec4& x) {
      auto mp = verify_detail::analyze_point(model.chart, x);
      KahlerStructure k = pointwise_frame_j();
      SphereAverage av = sphere_average_h(mp.fc, k);
      double sc = std::max(1.0, std::abs(mp.c.scalar));
      worst = std::max(worst, std::abs(av.h_av - av.hall_murphy_pred) / sc);
    });
    out.add("H_av = (s + 3 s*)/24 with pointwise orthogonal J on round_s4",
            worst, 1e-10);
  }
  {
    ChartMetric chart = parse_metric_spec(verify_detail::perturbed_metric_text(),
                                          "perturbed_t4");
    std::mt19937 rng(13u);
    std::uniform_real_distribution<double> dist(0.0, 6.28318530717958647692);
    double worst = 0.0;
    for (int i = 0; i < points_per_model; ++i) {
      Vec4 x = {dist(rng), dist(rng), dist(rng), dist(rng)};
      auto mp = verify_detail::analyze_point(chart, x);
      KahlerStructure k = pointwise_frame_j();
      SphereAverage av = sphere_average_h(mp.fc, k);
      double sc = std::max(1.0, std::abs(mp.c.scalar));
      worst = std::max(worst, std::abs(av.h_av - av.hall_murphy_pred) / sc);
    }
    out.add("H_av = (s + 3 s*)/24 with pointwise orthogonal J on a generic "
            "non-Kahler chart",
            worst, 1e-10);
  }
  return out;
}

inline VerifyResult verify_psi_suite(int budget = 100000) {
  VerifyResult out;
  std::mt19937 rng(40961u);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_abc = 0.0;
  double worst_psi = 0.0; // most negative scaled Psi under l1 + l3 >= 0
  for (int i = 0; i < budget; ++i) {
    LambdaTriple t(dist(rng), dist(rng), dist(rng));
    double l3 = std::max(1.0, t.l3());
    worst_abc = std::max(worst_abc,
                         std::abs(ab_minus_c2(t)) / (l3 * l3 * l3 * l3));
    // constrain to lambda1 + lambda3 >= 0 by reflecting
    LambdaTriple tc = t;
    if (tc.l1() + tc.l3() < 0.0) tc = LambdaTriple(-t.l1(), -t.l2(), -t.l3());
    double a2 = 4.0 * unit(rng), c2 = 4.0 * unit(rng);
    double ac = (2.0 * unit(rng) - 1.0) * std::sqrt(a2 * c2);
    PsiInputs in(tc, a2, c2, ac);
    double psi = psi_value(in);
    PsiCoefficients pc = psi_coefficients(tc, 2.0 / 3.0);
    double scale = std::max(1.0, std::abs(pc.a) * a2 + std::abs(pc.b) * c2 +
                                     2.0 * std::abs(pc.c) * std::sqrt(a2 * c2));
    worst_psi = std::max(worst_psi, -psi / scale);
  }
  out.add("AB - C^2 = 0 for k = 2/3 (" + std::to_string(budget) +
              " random trace-free triples)",
          worst_abc, 1e-10);
  out.add("Psi >= 0 under lambda1 + lambda3 >= 0 (" + std::to_string(budget) +
              " random inputs)",
          worst_psi, 1e-12);
  return out;
}

inline VerifyResult verify_weitzenboeck_suite(int budget = 100000) {
  VerifyResult out;
  std::mt19937 rng(222u);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  double worst = 0.0;
  for (int i = 0; i < budget; ++i) {
    double s = dist(rng);
    Vec3 kahler_spec = {-s / 12.0, -s / 12.0, s / 6.0};
    std::sort(kahler_spec.begin(), kahler_spec.end());
    double gap = weitzenboeck_gap(kahler_spec, s);
    worst = std::max(worst, std::abs(gap) / std::max(1.0, std::abs(s * s * s)));
  }
  out.add("36 det W+ - s |W+|^2 = 0 on Kahler spectra (-s/12, -s/12, s/6)",
          worst, 1e-10);
  {
    BuiltinModel model = builtin_model_info("fubini_study_cp2", std::vector<double>{1.0});
    double worst_fs = 0.0;
    verify_detail::for_sample_points(model, 5, 31u, [&](const Vec4& x) {
      auto mp = verify_detail::analyze_point(model.chart, x);
      double gap = weitzenboeck_gap(mp.ws, mp.c.scalar);
      worst_fs = std::max(worst_fs, std::abs(gap));
    });
    out.add("full pipeline gap on fubini_study_cp2 (curvature -> blocks -> "
            "spectrum)",
            worst_fs, 1e-7);
  }
  return out;
}

inline VerifyResult verify_signature_suite(int order = 24) {
  VerifyResult out;
  struct Case {
    const char* name;
    std::vector<double> params;
    double tau;
    double chi;
    bool kahler_equality;
  };
  const Case cases[] = {
      {"flat_t4", {}, 0.0, 0.0, false},
      {"round_s4", {1.0}, 0.0, 2.0, false},
      {"fubini_study_cp2", {1.0}, 1.0, 3.0, true},
      {"product_s2xs2", {1.0, 1.0}, 0.0, 4.0, true},
  };
  for (const Case& cs : cases) {
    BuiltinModel model = builtin_model_info(cs.name, cs.params);
    QuadratureAtlas atlas = atlas_for(model, order);
    InvariantReport rep = integrate_invariants(model, atlas);
    out.add(std::string("tau = (1/12 pi^2) int (|W+|^2 - |W-|^2) on ") + cs.name,
            std::abs(rep.tau - cs.tau), 1e-3);
    out.add(std::string("chi from (chi - 3 tau) + 3 tau on ") + cs.name,
            std::abs(rep.chi - cs.chi), 1e-3);
    if (cs.kahler_equality) {
      GurskyLebrunComparison gl = gursky_lebrun_comparison(rep);
      out.add(std::string("int |W+|^2 = int s^2/24 (Kahler equality) on ") + cs.name,
              std::abs(gl.gap) / std::max(1.0, gl.int_s2_over_24), 1e-6);
    }
  }
  return out;
}

/// suite in {all, lemma1, lemma2, lemma3, prop2, berger, hall_murphy,
/// psi, weitzenboeck, signature, chi}
inline VerifyResult run_verify(const std::string& suite, int budget = 100000) {
  auto merge = [](VerifyResult& into, const VerifyResult& from) {
    for (const auto& c : from.checks) into.checks.push_back(c);
    into.pass = into.pass && from.pass;
  };
  if (suite == "lemma1") return verify_lemma1(std::max(1000, budget / 100));
  if (suite == "lemma2") return verify_lemma2_suite();
  if (suite == "lemma3") return verify_lemma3_suite();
  if (suite == "prop2") return verify_prop2_suite();
  if (suite == "berger") return verify_berger_suite();
  if (suite == "hall_murphy") return verify_hall_murphy_suite();
  if (suite == "psi") return verify_psi_suite(budget);
  if (suite == "weitzenboeck") return verify_weitzenboeck_suite(budget);
  if (suite == "signature" || suite == "chi") return verify_signature_suite();
  if (suite == "all") {
    VerifyResult out;
    merge(out, verify_lemma1());
    merge(out, verify_lemma2_suite());
    merge(out, verify_lemma3_suite());
    merge(out, verify_prop2_suite());
    merge(out, verify_berger_suite());
    merge(out, verify_hall_murphy_suite());
    merge(out, verify_psi_suite(budget));
    merge(out, verify_weitzenboeck_suite(budget));
    merge(out, verify_signature_suite());
    return out;
  }
  throw InvalidArgument("unknown verify suite '" + suite + "'");
}

} // namespace weylpinch

#endif
