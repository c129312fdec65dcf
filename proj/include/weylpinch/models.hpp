#ifndef WEYLPINCH_MODELS_HPP
#define WEYLPINCH_MODELS_HPP

#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "weylpinch/errors.hpp"
#include "weylpinch/metric.hpp"

namespace weylpinch {

/// A catalog model: the chart plus everything the chart type itself does
/// not carry (complex structure, compactness, a box for in-domain
/// sampling). Chart conventions are documented in MODELS.md.
struct BuiltinModel {
  ChartMetric chart;
  bool kahler = false;  // declared integrable Kahler structure
  bool compact = false;
  std::function<Mat4(const Vec4&)> complex_structure; // coordinate J, if kahler
  std::array<std::pair<double, double>, 4> sample_box{};
  std::function<bool(const Vec4&)> sample_accept; // extra rejection rule
  std::vector<double> params;
};

namespace detail {

inline Expr c_(double v) { return expr_const(v); }
inline Expr x_(int i) { return expr_coord(i); }
inline Expr sq(Expr e) { return expr_binary(ExprKind::Pow, std::move(e), expr_const(2.0)); }
inline Expr sin_(Expr e) { return expr_unary(ExprKind::Sin, std::move(e)); }
inline Expr neg(Expr e) { return expr_unary(ExprKind::Neg, std::move(e)); }

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;

// standard block complex structure on R^4 = C^2,
// (u1,v1,u2,v2) with z_k = u_k + i v_k
inline Mat4 block_J() {
  Mat4 j{};
  j[1][0] = 1.0; j[0][1] = -1.0;
  j[3][2] = 1.0; j[2][3] = -1.0;
  return j;
}

inline CoordDomain interval(double lo, double hi, bool sing_lo, bool sing_hi) {
  CoordDomain d;
  d.lo = lo;
  d.hi = hi;
  d.singular_lo = sing_lo;
  d.singular_hi = sing_hi;
  return d;
}

inline CoordDomain periodic(double p) {
  CoordDomain d;
  d.periodic = true;
  d.period = p;
  d.lo = 0.0;
  d.hi = p;
  return d;
}

inline void set_component(ChartMetric& m, int i, int j, Expr e) {
  m.components[i][j] = e;
  m.components[j][i] = std::move(e);
}

inline BuiltinModel make_flat_t4() {
  BuiltinModel b;
  b.chart.name = "flat_t4";
  b.chart.coords = {"x1", "x2", "x3", "x4"};
  Expr zero = c_(0.0), one = c_(1.0);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) set_component(b.chart, i, j, i == j ? one : zero);
  for (int i = 0; i < 4; ++i) b.chart.domain[i] = periodic(kTwoPi);
  b.kahler = true;
  b.compact = true;
  b.complex_structure = [](const Vec4&) { return block_J(); };
  for (int i = 0; i < 4; ++i) b.sample_box[i] = {0.0, kTwoPi};
  return b;
}

inline BuiltinModel make_round_s4(double r) {
  if (!(r > 0.0)) throw InvalidArgument("round_s4: radius must be positive");
  BuiltinModel b;
  b.chart.name = "round_s4";
  b.chart.coords = {"eta", "theta", "phi", "psi"};
  // double-spherical chart (the sphere as a join of S^2 and S^1):
  // g = r^2 diag(1, cos^2 eta, cos^2 eta sin^2 theta, sin^2 eta)
  Expr r2 = c_(r * r);
  Expr c1 = sq(expr_unary(ExprKind::Cos, x_(0)));
  Expr s2 = sq(sin_(x_(1)));
  Expr s1 = sq(sin_(x_(0)));
  Expr zero = c_(0.0);
  set_component(b.chart, 0, 0, r2);
  set_component(b.chart, 1, 1, r2 * c1);
  set_component(b.chart, 2, 2, r2 * c1 * s2);
  set_component(b.chart, 3, 3, r2 * s1);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) set_component(b.chart, i, j, zero);
  b.chart.domain[0] = interval(0.0, 0.5 * kPi, true, true);
  b.chart.domain[1] = interval(0.0, kPi, true, true);
  b.chart.domain[2] = periodic(kTwoPi);
  b.chart.domain[3] = periodic(kTwoPi);
  b.compact = true;
  b.sample_box[0] = {0.15 * 0.5 * kPi, 0.85 * 0.5 * kPi};
  b.sample_box[1] = {0.15 * kPi, 0.85 * kPi};
  b.sample_box[2] = {0.0, kTwoPi};
  b.sample_box[3] = {0.0, kTwoPi};
  b.params = {r};
  return b;
}

inline BuiltinModel make_product_s2xs2(double r1, double r2) {
  if (!(r1 > 0.0) || !(r2 > 0.0))
    throw InvalidArgument("product_s2xs2: radii must be positive");
  BuiltinModel b;
  b.chart.name = "product_s2xs2";
  b.chart.coords = {"t1", "p1", "t2", "p2"};
  Expr zero = c_(0.0);
  set_component(b.chart, 0, 0, c_(r1 * r1));
  set_component(b.chart, 1, 1, c_(r1 * r1) * sq(sin_(x_(0))));
  set_component(b.chart, 2, 2, c_(r2 * r2));
  set_component(b.chart, 3, 3, c_(r2 * r2) * sq(sin_(x_(2))));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) set_component(b.chart, i, j, zero);
  b.chart.domain[0] = interval(0.0, kPi, true, true);
  b.chart.domain[1] = periodic(kTwoPi);
  b.chart.domain[2] = interval(0.0, kPi, true, true);
  b.chart.domain[3] = periodic(kTwoPi);
  b.kahler = true;
  b.compact = true;
  // J d/dt = (1/sin t) d/dp on each factor; the chart order (t1,p1,t2,p2)
  // carries the complex orientation
  b.complex_structure = [](const Vec4& x) {
    Mat4 j{};
    double s1 = std::sin(x[0]), s2 = std::sin(x[2]);
    j[1][0] = 1.0 / s1; j[0][1] = -s1;
    j[3][2] = 1.0 / s2; j[2][3] = -s2;
    return j;
  };
  b.sample_box[0] = b.sample_box[2] = {0.15 * kPi, 0.85 * kPi};
  b.sample_box[1] = b.sample_box[3] = {0.0, kTwoPi};
  b.params = {r1, r2};
  return b;
}

// Fubini-Study in the affine chart of C^2, real coordinates (u1,v1,u2,v2).
// With rho = 1 + |z|^2 the components are the real form of the Hermitian
// matrix 2*scale^2 (delta_ij rho - conj(z_i) z_j)/rho^2; scalar curvature
// is 12/scale^2.
inline BuiltinModel make_fubini_study(double scale) {
  if (!(scale > 0.0)) throw InvalidArgument("fubini_study_cp2: scale must be positive");
  BuiltinModel b;
  b.chart.name = "fubini_study_cp2";
  b.chart.coords = {"u1", "v1", "u2", "v2"};
  Expr u1 = x_(0), v1 = x_(1), u2 = x_(2), v2 = x_(3);
  Expr rho = c_(1.0) + sq(u1) + sq(v1) + sq(u2) + sq(v2);
  Expr rho2 = sq(rho);
  Expr cc = c_(2.0 * scale * scale);
  Expr p = u1 * u2 + v1 * v2;         // Re(conj(z1) z2)
  Expr q = u1 * v2 - v1 * u2;         // Im(conj(z1) z2)
  Expr d1 = c_(1.0) + sq(u2) + sq(v2); // rho - |z1|^2
  Expr d2 = c_(1.0) + sq(u1) + sq(v1); // rho - |z2|^2
  set_component(b.chart, 0, 0, cc * d1 / rho2);
  set_component(b.chart, 1, 1, cc * d1 / rho2);
  set_component(b.chart, 2, 2, cc * d2 / rho2);
  set_component(b.chart, 3, 3, cc * d2 / rho2);
  set_component(b.chart, 0, 1, c_(0.0));
  set_component(b.chart, 2, 3, c_(0.0));
  set_component(b.chart, 0, 2, neg(cc * p / rho2));
  set_component(b.chart, 1, 3, neg(cc * p / rho2));
  set_component(b.chart, 1, 2, cc * q / rho2);
  set_component(b.chart, 0, 3, neg(cc * q / rho2));
  // affine chart covers CP^2 minus a line (measure zero); all of R^4
  b.kahler = true;
  b.compact = true;
  b.complex_structure = [](const Vec4&) { return block_J(); };
  for (int i = 0; i < 4; ++i) b.sample_box[i] = {-1.5, 1.5};
  b.params = {scale};
  return b;
}

// Complex hyperbolic plane in the unit-ball chart of C^2. With
// sigma = 1 - |z|^2 the components are the real form of
// 2*scale^2 (delta_ij sigma + conj(z_i) z_j)/sigma^2; scalar curvature
// is -12/scale^2.
inline BuiltinModel make_complex_hyperbolic(double scale) {
  if (!(scale > 0.0))
    throw InvalidArgument("complex_hyperbolic_ch2: scale must be positive");
  BuiltinModel b;
  b.chart.name = "complex_hyperbolic_ch2";
  b.chart.coords = {"u1", "v1", "u2", "v2"};
  Expr u1 = x_(0), v1 = x_(1), u2 = x_(2), v2 = x_(3);
  Expr sigma = c_(1.0) - sq(u1) - sq(v1) - sq(u2) - sq(v2);
  Expr sigma2 = sq(sigma);
  Expr cc = c_(2.0 * scale * scale);
  Expr p = u1 * u2 + v1 * v2;
  Expr q = u1 * v2 - v1 * u2;
  Expr d1 = c_(1.0) - sq(u2) - sq(v2); // sigma + |z1|^2
  Expr d2 = c_(1.0) - sq(u1) - sq(v1); // sigma + |z2|^2
  set_component(b.chart, 0, 0, cc * d1 / sigma2);
  set_component(b.chart, 1, 1, cc * d1 / sigma2);
  set_component(b.chart, 2, 2, cc * d2 / sigma2);
  set_component(b.chart, 3, 3, cc * d2 / sigma2);
  set_component(b.chart, 0, 1, c_(0.0));
  set_component(b.chart, 2, 3, c_(0.0));
  set_component(b.chart, 0, 2, cc * p / sigma2);
  set_component(b.chart, 1, 3, cc * p / sigma2);
  set_component(b.chart, 1, 2, neg(cc * q / sigma2));
  set_component(b.chart, 0, 3, cc * q / sigma2);
  for (int i = 0; i < 4; ++i) b.chart.domain[i] = interval(-1.0, 1.0, false, false);
  b.chart.joint_domain = [](const Vec4& x) {
    return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] < 1.0;
  };
  b.kahler = true;
  b.compact = false;
  b.complex_structure = [](const Vec4&) { return block_J(); };
  for (int i = 0; i < 4; ++i) b.sample_box[i] = {-0.45, 0.45};
  b.sample_accept = [](const Vec4& x) {
    return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] < 0.64;
  };
  b.params = {scale};
  return b;
}

} // namespace detail

inline std::vector<std::string> builtin_model_names() {
  return {"flat_t4", "round_s4", "fubini_study_cp2", "product_s2xs2",
          "complex_hyperbolic_ch2"};
}

/// Instantiate a catalog model. Missing parameters default to 1.
inline BuiltinModel builtin_model_info(const std::string& name,
                                       std::span<const double> params = {}) {
  auto param = [&](std::size_t i) { return i < params.size() ? params[i] : 1.0; };
  if (name == "flat_t4") return detail::make_flat_t4();
  if (name == "round_s4") return detail::make_round_s4(param(0));
  if (name == "fubini_study_cp2") return detail::make_fubini_study(param(0));
  if (name == "product_s2xs2")
    return detail::make_product_s2xs2(param(0), param(1));
  if (name == "complex_hyperbolic_ch2")
    return detail::make_complex_hyperbolic(param(0));
  throw InvalidArgument("unknown model '" + name + "'");
}

inline ChartMetric builtin_model(const std::string& name,
                                 std::span<const double> params = {}) {
  return builtin_model_info(name, params).chart;
}

/// Deterministic in-domain sample point (uniform over the model's sample
/// box, rejection for joint constraints).
template <class Rng>
Vec4 sample_point(const BuiltinModel& b, Rng& rng) {
  for (int tries = 0; tries < 1000; ++tries) {
    Vec4 x;
    for (int i = 0; i < 4; ++i) {
      std::uniform_real_distribution<double> dist(b.sample_box[i].first,
                                                  b.sample_box[i].second);
      x[i] = dist(rng);
    }
    if (b.sample_accept && !b.sample_accept(x)) continue;
    return x;
  }
  throw InvalidArgument("sample_point: rejection sampling failed");
}

} // namespace weylpinch

#endif
