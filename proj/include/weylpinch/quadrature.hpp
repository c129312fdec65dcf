#ifndef WEYLPINCH_QUADRATURE_HPP
#define WEYLPINCH_QUADRATURE_HPP

#include <cmath>
#include <string>
#include <vector>

#include "weylpinch/curvature.hpp"
#include "weylpinch/forms.hpp"
#include "weylpinch/models.hpp"
#include "weylpinch/parallel.hpp"
#include "weylpinch/spectrum.hpp"

namespace weylpinch {

struct GaussLegendre {
  std::vector<double> nodes;   // on (-1, 1)
  std::vector<double> weights;
};

/// Gauss-Legendre rule by Newton iteration on the Legendre recurrence.
inline GaussLegendre gauss_legendre(int n) {
  GaussLegendre r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.nodes[i] = -x; // ascending
    r.weights[i] = w;
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

struct QuadNode {
  Vec4 x{};
  double w = 0.0; // includes the volume density sqrt(det g)
};

struct QuadratureAtlas {
  std::string model;
  int order = 0;
  std::vector<QuadNode> nodes;
  std::string exactness;
  double volume = 0.0; // pairwise sum of the weights
};

namespace detail {

inline double sqrt_det_at(const ChartMetric& chart, const Vec4& x) {
  std::array<double, 4> c = {x[0], x[1], x[2], x[3]};
  Mat4 g{};
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j)
      g[i][j] = g[j][i] = expr_eval(chart.components[i][j], c);
  auto chol = cholesky4(g);
  if (!chol) throw ChartDomainError("quadrature node with non-SPD metric");
  return std::sqrt(det_from_cholesky(*chol));
}

struct Axis {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline Axis gl_axis(int order, double lo, double hi) {
  GaussLegendre gl = gauss_legendre(order);
  Axis a;
  a.nodes.resize(order);
  a.weights.resize(order);
  double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (int i = 0; i < order; ++i) {
    a.nodes[i] = mid + half * gl.nodes[i];
    a.weights[i] = half * gl.weights[i];
  }
  return a;
}

inline Axis trapezoid_axis(int order, double period) {
  Axis a;
  a.nodes.resize(order);
  a.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    a.nodes[i] = period * i / order;
    a.weights[i] = period / order;
  }
  return a;
}

inline QuadratureAtlas product_atlas(const ChartMetric& chart,
                                     const std::array<Axis, 4>& axes,
                                     std::string exactness, int order,
                                     bool unit_density) {
  QuadratureAtlas atlas;
  atlas.model = chart.name;
  atlas.order = order;
  atlas.exactness = std::move(exactness);
  std::array<std::size_t, 4> n;
  std::size_t total = 1;
  for (int i = 0; i < 4; ++i) {
    n[i] = axes[i].nodes.size();
    total *= n[i];
  }
  atlas.nodes.resize(total);
  parallel_for(total, [&](std::size_t idx) {
    std::size_t rem = idx;
    std::array<std::size_t, 4> ii;
    for (int d = 3; d >= 0; --d) {
      ii[d] = rem % n[d];
      rem /= n[d];
    }
    QuadNode node;
    double w = 1.0;
    for (int d = 0; d < 4; ++d) {
      node.x[d] = axes[d].nodes[ii[d]];
      w *= axes[d].weights[ii[d]];
    }
    node.w = unit_density ? w : w * sqrt_det_at(chart, node.x);
    atlas.nodes[idx] = node;
  });
  std::vector<double> ws(total);
  for (std::size_t i = 0; i < total; ++i) ws[i] = atlas.nodes[i].w;
  atlas.volume = pairwise_sum(ws);
  return atlas;
}

} // namespace detail

/// Quadrature atlas covering a compact catalog model up to measure zero.
/// `order` is the per-axis node count; interval axes use Gauss-Legendre,
/// periodic axes the trapezoid rule. The Fubini-Study chart integrates
/// over all of R^4 through the substitution r = tan(t).
inline QuadratureAtlas atlas_for(const BuiltinModel& model, int order) {
  if (order < 4) throw InvalidArgument("atlas_for: order must be >= 4");
  if (!model.compact)
    throw InvalidArgument("atlas_for: model '" + model.chart.name +
                          "' is not compact; global invariants are only "
                          "defined for the compact catalog models");
  const std::string& name = model.chart.name;
  const double pi = 3.14159265358979323846;
  const double two_pi = 2.0 * pi;

  if (name == "flat_t4") {
    std::array<detail::Axis, 4> axes;
    for (int i = 0; i < 4; ++i) axes[i] = detail::trapezoid_axis(order, two_pi);
    // flat chart: sqrt(det g) = 1 exactly, keep weights exact
    return detail::product_atlas(model.chart, axes,
                                 "trapezoid rule on all four periodic axes",
                                 order, true);
  }
  if (name == "round_s4") {
    std::array<detail::Axis, 4> axes;
    axes[0] = detail::gl_axis(order, 0.0, 0.5 * pi);
    axes[1] = detail::gl_axis(order, 0.0, pi);
    axes[2] = detail::trapezoid_axis(order, two_pi);
    axes[3] = detail::trapezoid_axis(order, two_pi);
    return detail::product_atlas(
        model.chart, axes,
        "Gauss-Legendre on the two polar axes, trapezoid on the "
        "periodic axes",
        order, false);
  }
  if (name == "product_s2xs2") {
    std::array<detail::Axis, 4> axes;
    axes[0] = detail::gl_axis(order, 0.0, pi);
    axes[1] = detail::trapezoid_axis(order, two_pi);
    axes[2] = detail::gl_axis(order, 0.0, pi);
    axes[3] = detail::trapezoid_axis(order, two_pi);
    return detail::product_atlas(
        model.chart, axes,
        "Gauss-Legendre on polar axes, trapezoid on periodic axes", order,
        false);
  }
  if (name == "fubini_study_cp2") {
    // spherical chart coordinates (t, alpha, beta, gamma) with
    // x = tan(t) * xi(alpha, beta, gamma); the bounded box makes
    // Gauss-Legendre converge spectrally
    detail::Axis t = detail::gl_axis(order, 0.0, 0.5 * pi);
    detail::Axis al = detail::gl_axis(order, 0.0, pi);
    detail::Axis be = detail::gl_axis(order, 0.0, pi);
    detail::Axis ga = detail::trapezoid_axis(order, two_pi);
    QuadratureAtlas atlas;
    atlas.model = name;
    atlas.order = order;
    atlas.exactness =
        "Gauss-Legendre in (t, alpha, beta) with r = tan(t), trapezoid in "
        "gamma";
    std::size_t total =
        static_cast<std::size_t>(order) * order * order * order;
    atlas.nodes.resize(total);
    parallel_for(total, [&](std::size_t idx) {
      std::size_t rem = idx;
      int ig = static_cast<int>(rem % order); rem /= order;
      int ib = static_cast<int>(rem % order); rem /= order;
      int ia = static_cast<int>(rem % order); rem /= order;
      int it = static_cast<int>(rem);
      double tt = t.nodes[it], aa = al.nodes[ia], bb = be.nodes[ib],
             gg = ga.nodes[ig];
      double r = std::tan(tt);
      double sec2 = 1.0 + r * r;
      Vec4 xi = {std::cos(aa), std::sin(aa) * std::cos(bb),
                 std::sin(aa) * std::sin(bb) * std::cos(gg),
                 std::sin(aa) * std::sin(bb) * std::sin(gg)};
      QuadNode node;
      node.x = scale4(xi, r);
      double jac = r * r * r * sec2 * std::sin(aa) * std::sin(aa) * std::sin(bb);
      node.w = t.weights[it] * al.weights[ia] * be.weights[ib] *
               ga.weights[ig] * jac * detail::sqrt_det_at(model.chart, node.x);
      atlas.nodes[idx] = node;
    });
    std::vector<double> ws(total);
    for (std::size_t i = 0; i < total; ++i) ws[i] = atlas.nodes[i].w;
    atlas.volume = pairwise_sum(ws);
    return atlas;
  }
  throw InvalidArgument("atlas_for: no atlas for model '" + name + "'");
}

struct IntegrandStats {
  double min = 0.0;
  double max = 0.0;
};

struct InvariantReport {
  double tau = 0.0;
  double chi_minus_3tau = 0.0;
  double chi = 0.0;
  double volume = 0.0;
  double int_wplus_sq = 0.0;  // integral of |W+|^2
  double int_wminus_sq = 0.0;
  double int_s2_over_24 = 0.0;
  IntegrandStats stats_wplus_sq{}, stats_wminus_sq{}, stats_s{}, stats_ric0_sq{};
  std::size_t node_count = 0;
};

/// Characteristic numbers from curvature:
///   tau        = (1/12 pi^2) int (|W+|^2 - |W-|^2)
///   chi - 3tau = (1/8 pi^2)  int (s^2/24 - |W+|^2 + 3|W-|^2 - |ric0|^2/2)
inline InvariantReport integrate_invariants(const BuiltinModel& model,
                                            const QuadratureAtlas& atlas,
                                            int orientation = +1) {
  if (atlas.model != model.chart.name)
    throw InvalidArgument("integrate_invariants: atlas does not match model");
  const std::size_t n = atlas.nodes.size();
  std::vector<double> wp(n), wm(n), ss(n), r0(n);
  std::vector<double> wp_w(n), wm_w(n), s2_w(n), r0_w(n);
  parallel_for(n, [&](std::size_t i) {
    const QuadNode& node = atlas.nodes[i];
    CurvaturePoint c = curvature_at(model.chart, node.x);
    Frame f = orthonormal_frame(c.metric, orientation);
    OperatorBlocks ob = curvature_operator(c, f);
    double wplus_sq = frobenius_sq3(ob.wplus);
    double wminus_sq = frobenius_sq3(ob.wminus);
    double ric0_sq = 0.0;
    {
      FrameCurvature fc = frame_curvature(c, f);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) ric0_sq += fc.ric0[a][b] * fc.ric0[a][b];
    }
    wp[i] = wplus_sq;
    wm[i] = wminus_sq;
    ss[i] = c.scalar;
    r0[i] = ric0_sq;
    wp_w[i] = wplus_sq * node.w;
    wm_w[i] = wminus_sq * node.w;
    s2_w[i] = c.scalar * c.scalar / 24.0 * node.w;
    r0_w[i] = ric0_sq * node.w;
  });
  InvariantReport rep;
  rep.node_count = n;
  rep.volume = atlas.volume;
  rep.int_wplus_sq = pairwise_sum(wp_w);
  rep.int_wminus_sq = pairwise_sum(wm_w);
  rep.int_s2_over_24 = pairwise_sum(s2_w);
  double int_ric0 = pairwise_sum(r0_w);
  const double pi = 3.14159265358979323846;
  rep.tau = (rep.int_wplus_sq - rep.int_wminus_sq) / (12.0 * pi * pi);
  rep.chi_minus_3tau = (rep.int_s2_over_24 - rep.int_wplus_sq +
                        3.0 * rep.int_wminus_sq - 0.5 * int_ric0) /
                       (8.0 * pi * pi);
  rep.chi = rep.chi_minus_3tau + 3.0 * rep.tau;
  auto stats = [](const std::vector<double>& v) {
    IntegrandStats s{v[0], v[0]};
    for (double x : v) {
      s.min = std::min(s.min, x);
      s.max = std::max(s.max, x);
    }
    return s;
  };
  rep.stats_wplus_sq = stats(wp);
  rep.stats_wminus_sq = stats(wm);
  rep.stats_s = stats(ss);
  rep.stats_ric0_sq = stats(r0);
  return rep;
}

struct GurskyLebrunComparison {
  double int_wplus_sq = 0.0;
  double int_s2_over_24 = 0.0;
  double gap = 0.0; // int |W+|^2 - int s^2/24, signed
};

/// The integral comparison int |W+|^2 vs int s^2/24; the two agree for
/// Kahler models (the equality case of the comparison on Einstein
/// manifolds of positive scalar curvature).
inline GurskyLebrunComparison gursky_lebrun_comparison(const InvariantReport& rep) {
  return {rep.int_wplus_sq, rep.int_s2_over_24,
          rep.int_wplus_sq - rep.int_s2_over_24};
}

inline GurskyLebrunComparison gursky_lebrun_comparison(
    const BuiltinModel& model, const QuadratureAtlas& atlas,
    int orientation = +1) {
  return gursky_lebrun_comparison(integrate_invariants(model, atlas, orientation));
}

} // namespace weylpinch

#endif
