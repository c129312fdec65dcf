#ifndef WEYLPINCH_METRIC_HPP
#define WEYLPINCH_METRIC_HPP

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "weylpinch/errors.hpp"
#include "weylpinch/expr.hpp"
#include "weylpinch/linalg.hpp"

namespace weylpinch {

enum class DerivativeBackend { hyperdual, finite_difference };

/// Per-coordinate chart domain: an open interval or a periodic circle.
struct CoordDomain {
  bool periodic = false;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  double period = 0.0;
  // marks interval endpoints that are coordinate-singular loci of the
  // chart (e.g. poles of spherical coordinates) rather than hard walls
  bool singular_lo = false;
  bool singular_hi = false;
};

/// A coordinate chart with symmetric metric component expressions.
/// components[i][j] and components[j][i] share the same expression node,
/// so g_ij = g_ji holds exactly.
struct ChartMetric {
  std::string name;
  std::array<std::string, 4> coords;
  std::array<std::array<Expr, 4>, 4> components;
  std::array<CoordDomain, 4> domain;
  DerivativeBackend backend = DerivativeBackend::hyperdual;
  // optional joint constraint for domains that are not coordinate boxes
  // (e.g. the unit ball); null means no extra constraint
  std::function<bool(const Vec4&)> joint_domain;
};

/// Metric data at one point: value, inverse, first and second derivatives
/// of the components, and the volume density.
struct MetricValue {
  Vec4 point{};
  Mat4 g{};
  Mat4 g_inv{};
  Ten3 dg{};  // dg[k][i][j]    = d g_ij / d x_k
  Ten4 d2g{}; // d2g[k][l][i][j] = d^2 g_ij / d x_k d x_l
  double sqrt_det_g = 0.0;
};

namespace detail {

inline void check_domain(const ChartMetric& m, const Vec4& x) {
  for (int k = 0; k < 4; ++k) {
    const CoordDomain& d = m.domain[k];
    if (d.periodic) continue;
    double v = x[k];
    auto near = [&](double edge) {
      return std::abs(v - edge) <= 1e-9 * std::max(1.0, std::abs(edge));
    };
    if (!(v > d.lo) || !(v < d.hi)) {
      std::ostringstream os;
      if ((d.singular_lo && std::isfinite(d.lo) && near(d.lo)) ||
          (d.singular_hi && std::isfinite(d.hi) && near(d.hi))) {
        os << "coordinate-singular locus: " << m.coords[k] << " = " << v
           << " in chart '" << m.name << "'";
      } else {
        os << "point outside chart domain: " << m.coords[k] << " = " << v
           << " not in (" << d.lo << ", " << d.hi << ")";
      }
      throw ChartDomainError(os.str());
    }
  }
  if (m.joint_domain && !m.joint_domain(x)) {
    std::ostringstream os;
    os << "point outside chart domain of '" << m.name << "'";
    throw ChartDomainError(os.str());
  }
}

inline void fill_hyperdual(const ChartMetric& m, const Vec4& x, MetricValue& out) {
  std::array<HyperDual, 4> seeds;
  for (int k = 0; k < 4; ++k) seeds[k] = hd_coord(x[k], k);
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      HyperDual v = expr_eval(m.components[i][j], seeds);
      out.g[i][j] = out.g[j][i] = v.v;
      for (int k = 0; k < 4; ++k) out.dg[k][i][j] = out.dg[k][j][i] = v.d[k];
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          double h = v.h[hd_index(k, l)];
          out.d2g[k][l][i][j] = out.d2g[k][l][j][i] = h;
        }
    }
  }
}

inline void fill_finite_difference(const ChartMetric& m, const Vec4& x,
                                   MetricValue& out) {
  auto eval = [&](const Vec4& p, int i, int j) {
    std::array<double, 4> c = {p[0], p[1], p[2], p[3]};
    return expr_eval(m.components[i][j], c);
  };
  const double eps = std::numeric_limits<double>::epsilon();
  const double h1 = std::cbrt(eps); // first derivatives
  const double h2 = std::sqrt(std::sqrt(eps)); // second derivatives
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      double f0 = eval(x, i, j);
      out.g[i][j] = out.g[j][i] = f0;
      std::array<double, 4> step1, step2;
      for (int k = 0; k < 4; ++k) {
        step1[k] = h1 * std::max(1.0, std::abs(x[k]));
        step2[k] = h2 * std::max(1.0, std::abs(x[k]));
      }
      for (int k = 0; k < 4; ++k) {
        Vec4 xp = x, xm = x;
        xp[k] += step1[k];
        xm[k] -= step1[k];
        double d = (eval(xp, i, j) - eval(xm, i, j)) / (2.0 * step1[k]);
        out.dg[k][i][j] = out.dg[k][j][i] = d;
      }
      for (int k = 0; k < 4; ++k) {
        for (int l = k; l < 4; ++l) {
          double dd;
          if (k == l) {
            Vec4 xp = x, xm = x;
            xp[k] += step2[k];
            xm[k] -= step2[k];
            dd = (eval(xp, i, j) - 2.0 * f0 + eval(xm, i, j)) /
                 (step2[k] * step2[k]);
          } else {
            Vec4 xpp = x, xpm = x, xmp = x, xmm = x;
            xpp[k] += step2[k]; xpp[l] += step2[l];
            xpm[k] += step2[k]; xpm[l] -= step2[l];
            xmp[k] -= step2[k]; xmp[l] += step2[l];
            xmm[k] -= step2[k]; xmm[l] -= step2[l];
            dd = (eval(xpp, i, j) - eval(xpm, i, j) - eval(xmp, i, j) +
                  eval(xmm, i, j)) /
                 (4.0 * step2[k] * step2[l]);
          }
          out.d2g[k][l][i][j] = out.d2g[k][l][j][i] = dd;
          out.d2g[l][k][i][j] = out.d2g[l][k][j][i] = dd;
        }
      }
    }
  }
}

} // namespace detail

/// Evaluate the metric and its first two derivatives at a chart point.
inline MetricValue metric_at(const ChartMetric& m, const Vec4& point) {
  detail::check_domain(m, point);
  MetricValue out;
  out.point = point;
  if (m.backend == DerivativeBackend::hyperdual)
    detail::fill_hyperdual(m, point, out);
  else
    detail::fill_finite_difference(m, point, out);
  // Equilibrate before factoring: charts with coordinate degeneracies
  // (poles, large affine radii) give g a huge diagonal spread, and
  // inverting the unit-diagonal matrix D g D instead keeps the inverse
  // accurate there.
  Vec4 d{};
  bool positive_diag = true;
  for (int i = 0; i < 4; ++i) {
    if (!(out.g[i][i] > 0.0)) positive_diag = false;
    else d[i] = 1.0 / std::sqrt(out.g[i][i]);
  }
  std::optional<Mat4> chol;
  double scaled_det = 1.0;
  if (positive_diag) {
    Mat4 scaled{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) scaled[i][j] = out.g[i][j] * d[i] * d[j];
    chol = cholesky4(scaled);
    if (chol) scaled_det = det_from_cholesky(*chol);
  }
  if (!chol) {
    std::ostringstream os;
    os << "metric is not positive definite at (" << point[0] << ", "
       << point[1] << ", " << point[2] << ", " << point[3] << ")";
    throw ChartDomainError(os.str());
  }
  Mat4 scaled_inv = spd_inverse(*chol);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.g_inv[i][j] = d[i] * scaled_inv[i][j] * d[j];
  out.sqrt_det_g = std::sqrt(scaled_det) / (d[0] * d[1] * d[2] * d[3]);
  return out;
}

// ---- metric spec files ----------------------------------------------
//
// UTF-8 text, line oriented:
//   coords: x1 x2 x3 x4
//   domain: x1 in (0, pi)
//   domain: x2 periodic 2*pi
//   g[1][1] = sin(x2)^2
// '#' starts a comment. Components use 1-based indices with i <= j;
// unspecified off-diagonal components default to 0, unspecified diagonal
// components are an error.

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double const_eval(std::string_view text, int line, int col_offset) {
  Expr e = parse_expression(text, {}, line, col_offset);
  std::array<double, 4> dummy{};
  return expr_eval(e, dummy);
}

} // namespace detail

inline ChartMetric parse_metric_spec(std::string_view text,
                                     std::string name = "user_metric") {
  ChartMetric m;
  m.name = std::move(name);
  std::vector<std::string> coord_names;
  std::array<std::array<bool, 4>, 4> given{};
  bool coords_seen = false;

  std::vector<std::string> lines;
  {
    std::string cur;
    for (char c : text) {
      if (c == '\n') { lines.push_back(cur); cur.clear(); }
      else cur.push_back(c);
    }
    lines.push_back(cur);
  }

  for (std::size_t li = 0; li < lines.size(); ++li) {
    int line_no = static_cast<int>(li) + 1;
    std::string raw = lines[li];
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    std::string line = detail::trim(raw);
    if (line.empty()) continue;

    if (line.rfind("coords:", 0) == 0) {
      if (coords_seen)
        throw ParseError("duplicate coords line", line_no, 1);
      std::istringstream is(line.substr(7));
      std::string w;
      while (is >> w) coord_names.push_back(w);
      if (coord_names.size() != 4)
        throw ParseError("metric must have dimension 4, got " +
                             std::to_string(coord_names.size()) +
                             " coordinates",
                         line_no, 1);
      for (int i = 0; i < 4; ++i) m.coords[i] = coord_names[i];
      coords_seen = true;
      continue;
    }
    if (!coords_seen)
      throw ParseError("expected 'coords:' before '" + line + "'", line_no, 1);

    if (line.rfind("domain:", 0) == 0) {
      std::string body = detail::trim(line.substr(7));
      std::istringstream is(body);
      std::string coord, word;
      is >> coord >> word;
      int idx = -1;
      for (int i = 0; i < 4; ++i)
        if (coord_names[i] == coord) idx = i;
      if (idx < 0)
        throw ParseError("unknown coordinate '" + coord + "' in domain line",
                         line_no, 1);
      if (word == "in") {
        std::string rest;
        std::getline(is, rest);
        rest = detail::trim(rest);
        if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')')
          throw ParseError("expected 'in (lo, hi)'", line_no, 1);
        std::string inner = rest.substr(1, rest.size() - 2);
        std::size_t comma = inner.find(',');
        if (comma == std::string::npos)
          throw ParseError("expected 'in (lo, hi)'", line_no, 1);
        CoordDomain d;
        d.lo = detail::const_eval(inner.substr(0, comma), line_no, 1);
        d.hi = detail::const_eval(inner.substr(comma + 1), line_no, 1);
        if (!(d.lo < d.hi))
          throw ParseError("empty domain interval", line_no, 1);
        m.domain[idx] = d;
      } else if (word == "periodic") {
        std::string rest;
        std::getline(is, rest);
        CoordDomain d;
        d.periodic = true;
        d.period = detail::const_eval(detail::trim(rest), line_no, 1);
        if (!(d.period > 0.0))
          throw ParseError("period must be positive", line_no, 1);
        d.lo = 0.0;
        d.hi = d.period;
        m.domain[idx] = d;
      } else {
        throw ParseError("expected 'in' or 'periodic' after coordinate name",
                         line_no, 1);
      }
      continue;
    }

    if (line.rfind("g[", 0) == 0) {
      // component line g[i][j] = expr; track the column of the '=' sign
      std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ParseError("expected '=' in component line", line_no, 1);
      std::string head = detail::trim(line.substr(0, eq));
      int i = 0, j = 0;
      if (std::sscanf(head.c_str(), "g[%d][%d]", &i, &j) != 2)
        throw ParseError("malformed component index '" + head + "'", line_no, 1);
      if (i < 1 || i > 4 || j < 1 || j > 4)
        throw ParseError("component index out of range in '" + head + "'",
                         line_no, 1);
      if (i > j)
        throw ParseError(
            "asymmetric component declaration '" + head +
                "': declare the upper triangle (i <= j)",
            line_no, 1);
      if (given[i - 1][j - 1])
        throw ParseError("duplicate component '" + head + "'", line_no, 1);

      // column of the first character of the expression inside the raw line
      std::size_t eq_raw = raw.find('=');
      std::size_t expr_start = raw.find_first_not_of(" \t", eq_raw + 1);
      if (expr_start == std::string::npos)
        throw ParseError("missing expression after '='", line_no,
                         static_cast<int>(eq_raw) + 2);
      std::string expr_text = detail::trim(raw.substr(expr_start));
      Expr e = parse_expression(expr_text, coord_names, line_no,
                                static_cast<int>(expr_start) + 1);
      m.components[i - 1][j - 1] = e;
      m.components[j - 1][i - 1] = e; // shared node: exact symmetry
      given[i - 1][j - 1] = given[j - 1][i - 1] = true;
      continue;
    }

    throw ParseError("unrecognized line '" + line + "'", line_no, 1);
  }

  if (!coords_seen) throw ParseError("missing 'coords:' line", 1, 1);
  for (int i = 0; i < 4; ++i)
    if (!given[i][i])
      throw ParseError("diagonal component g[" + std::to_string(i + 1) + "][" +
                           std::to_string(i + 1) + "] was not specified",
                       static_cast<int>(lines.size()), 1);
  Expr zero = expr_const(0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (!m.components[i][j]) m.components[i][j] = zero;
  return m;
}

} // namespace weylpinch

#endif
