#ifndef WEYLPINCH_REPORT_HPP
#define WEYLPINCH_REPORT_HPP

#include <cstdio>
#include <ctime>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "weylpinch/identities.hpp"
#include "weylpinch/kahler.hpp"
#include "weylpinch/parallel.hpp"
#include "weylpinch/quadrature.hpp"

namespace weylpinch {

// -------------------------------------------------------------------
// Analysis configuration, suite execution and report emission. Reports
// are byte-deterministic for a fixed config: sampling seeds derive from
// a hash of the canonical config string, reductions have fixed order,
// and floats are printed with 17 significant digits. The timestamp
// field is the one exception to the determinism contract.
// -------------------------------------------------------------------

struct GridSpec {
  std::array<int, 4> counts{1, 1, 1, 1};
  bool has_bounds = false;
  std::array<std::pair<double, double>, 4> bounds{};
};

struct AnalysisConfig {
  std::string model;             // builtin model name, empty for user metric
  std::vector<double> params;
  std::string metric_path;       // user metric file, empty for builtin
  std::vector<Vec4> points;      // explicit points
  std::optional<GridSpec> grid;
  int orientation = +1;
  std::vector<std::string> suites = {"spectra"};
  int quadrature_order = 16;
  std::string output_path;
  std::string format = "json";
  DerivativeBackend backend = DerivativeBackend::hyperdual;
};

inline std::string canonical_config_string(const AnalysisConfig& c) {
  std::ostringstream os;
  char buf[40];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
  };
  os << "model=" << c.model << ";params=";
  for (double p : c.params) { num(p); os << ","; }
  os << ";metric=" << c.metric_path << ";points=";
  for (const Vec4& p : c.points) {
    for (double v : p) { num(v); os << ","; }
    os << "|";
  }
  os << ";grid=";
  if (c.grid) {
    for (int n : c.grid->counts) os << n << "x";
    if (c.grid->has_bounds)
      for (auto& b : c.grid->bounds) {
        num(b.first); os << ":"; num(b.second); os << ",";
      }
  }
  os << ";orientation=" << c.orientation << ";suites=";
  for (const auto& s : c.suites) os << s << ",";
  os << ";order=" << c.quadrature_order << ";format=" << c.format
     << ";backend=" << (c.backend == DerivativeBackend::hyperdual ? "hyperdual" : "fd");
  return os.str();
}

inline uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct PointRecord {
  Vec4 point{};
  double s = 0.0;
  Vec3 lambda_plus{}, lambda_minus{};
  double norm_sq_plus = 0.0, norm_sq_minus = 0.0;
  double det_plus = 0.0, det_minus = 0.0;
  bool degenerate_plus = false, degenerate_minus = false;
  double ric0_frobenius = 0.0;
  bool has_pinch = false;
  PinchReport pinch{};
  bool has_kahler = false;
  double berger_residual = 0.0;
  double hall_murphy_residual = 0.0;
  double sstar_minus_s = 0.0;
  double wplus_form_residual = 0.0; // vs (-s/12, -s/12, s/6), relative
  bool has_identities = false;
  double weitz_gap = 0.0;
  double w2_identity_residual = 0.0;
};

struct SuiteResult {
  std::string name;
  bool pass = true;
  double worst_residual = 0.0;
};

struct ReportDocument {
  int schema = 1;
  std::string tool = "weylpinch";
  std::string version = "0.1.0";
  std::string timestamp; // excluded from the determinism contract
  AnalysisConfig config;
  std::string config_canonical;
  std::vector<PointRecord> points;
  bool has_global = false;
  InvariantReport global{};
  GurskyLebrunComparison gl{};
  std::vector<SuiteResult> suites;
  bool pass = true;
};

namespace detail {

inline bool has_suite(const AnalysisConfig& c, const std::string& name) {
  for (const auto& s : c.suites)
    if (s == name || s == "all") return true;
  return false;
}

inline std::vector<Vec4> resolve_points(const AnalysisConfig& cfg,
                                        const BuiltinModel* model,
                                        const ChartMetric& chart) {
  std::vector<Vec4> pts = cfg.points;
  if (cfg.grid) {
    const GridSpec& g = *cfg.grid;
    std::array<std::pair<double, double>, 4> bounds;
    if (g.has_bounds) {
      bounds = g.bounds;
      for (int d = 0; d < 4; ++d) {
        const CoordDomain& dom = chart.domain[d];
        if (!dom.periodic &&
            (!(bounds[d].first > dom.lo) || !(bounds[d].second < dom.hi)))
          throw InvalidArgument("grid bounds leave the chart domain on axis " +
                                std::to_string(d + 1));
      }
    } else if (model) {
      bounds = model->sample_box;
    } else {
      for (int d = 0; d < 4; ++d) {
        const CoordDomain& dom = chart.domain[d];
        if (dom.periodic) {
          bounds[d] = {0.0, dom.period};
        } else if (std::isfinite(dom.lo) && std::isfinite(dom.hi)) {
          double w = dom.hi - dom.lo;
          bounds[d] = {dom.lo + 0.05 * w, dom.hi - 0.05 * w};
        } else {
          throw InvalidArgument(
              "grid over an unbounded user-metric domain requires --bounds");
        }
      }
    }
    for (int n : g.counts)
      if (n < 1) throw InvalidArgument("grid counts must be >= 1");
    std::array<int, 4> n = g.counts;
    for (int i0 = 0; i0 < n[0]; ++i0)
      for (int i1 = 0; i1 < n[1]; ++i1)
        for (int i2 = 0; i2 < n[2]; ++i2)
          for (int i3 = 0; i3 < n[3]; ++i3) {
            std::array<int, 4> ii = {i0, i1, i2, i3};
            Vec4 p;
            for (int d = 0; d < 4; ++d) {
              double lo = bounds[d].first, hi = bounds[d].second;
              p[d] = (n[d] == 1) ? 0.5 * (lo + hi)
                                 : lo + (hi - lo) * ii[d] / (n[d] - 1.0);
            }
            if (model && model->sample_accept && !model->sample_accept(p))
              throw InvalidArgument("grid point outside the model domain");
            pts.push_back(p);
          }
  }
  if (pts.empty())
    throw InvalidArgument("no analysis points: give --point or --grid");
  return pts;
}

} // namespace detail

/// Execute the requested suites over the configured points.
inline ReportDocument run_analyze(const AnalysisConfig& cfg) {
  ReportDocument doc;
  doc.config = cfg;
  doc.config_canonical = canonical_config_string(cfg);
  {
    std::time_t t = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    doc.timestamp = buf;
  }

  std::optional<BuiltinModel> model;
  ChartMetric chart;
  if (!cfg.model.empty()) {
    model = builtin_model_info(cfg.model, cfg.params);
    chart = model->chart;
  } else if (!cfg.metric_path.empty()) {
    std::ifstream in(cfg.metric_path);
    if (!in) throw InvalidArgument("cannot open metric file " + cfg.metric_path);
    std::stringstream ss;
    ss << in.rdbuf();
    chart = parse_metric_spec(ss.str(), cfg.metric_path);
  } else {
    throw InvalidArgument("config needs either a model or a metric file");
  }
  chart.backend = cfg.backend;

  std::vector<Vec4> pts =
      detail::resolve_points(cfg, model ? &*model : nullptr, chart);

  bool want_spectra = detail::has_suite(cfg, "spectra");
  bool want_pinch = detail::has_suite(cfg, "pinch");
  bool want_kahler = detail::has_suite(cfg, "kahler");
  bool want_identities = detail::has_suite(cfg, "identities");
  bool want_invariants = detail::has_suite(cfg, "invariants");
  bool model_kahler = model && model->kahler;

  doc.points.resize(pts.size());
  std::string first_error;
  std::mutex err_mutex;
  parallel_for(pts.size(), [&](std::size_t i) {
    try {
      PointRecord rec;
      rec.point = pts[i];
      CurvaturePoint c = curvature_at(chart, pts[i]);
      Frame f = orthonormal_frame(c.metric, cfg.orientation);
      FrameCurvature fc = frame_curvature(c, f);
      OperatorBlocks ob = curvature_operator(fc);
      WeylSpectrum ws = spectrum(ob);
      rec.s = c.scalar;
      rec.lambda_plus = ws.lambda_plus;
      rec.lambda_minus = ws.lambda_minus;
      rec.norm_sq_plus = ws.norm_sq_plus;
      rec.norm_sq_minus = ws.norm_sq_minus;
      rec.det_plus = ws.det_plus;
      rec.det_minus = ws.det_minus;
      rec.degenerate_plus = ws.degenerate_plus;
      rec.degenerate_minus = ws.degenerate_minus;
      rec.ric0_frobenius = std::sqrt(frobenius_sq3(ob.ric0_block));
      if (want_pinch) {
        rec.has_pinch = true;
        rec.pinch = pinch_predicates(ws, c.scalar);
      }
      if (want_kahler) {
        rec.has_kahler = true;
        KahlerStructure k = model_kahler ? kahler_from_model(*model, c.metric, f)
                                         : pointwise_frame_j();
        SphereAverage av = sphere_average_h(fc, k);
        rec.hall_murphy_residual = std::abs(av.h_av - av.hall_murphy_pred);
        rec.sstar_minus_s = av.s_star - fc.s;
        if (model_kahler) {
          rec.berger_residual = std::abs(av.h_av - av.berger_pred);
          double sc = std::max(1.0, std::abs(fc.s) / 4.0);
          Vec3 expect = {-fc.s / 12.0, -fc.s / 12.0, fc.s / 6.0};
          std::sort(expect.begin(), expect.end());
          double worst = 0.0;
          for (int q = 0; q < 3; ++q)
            worst = std::max(worst, std::abs(ws.lambda_plus[q] - expect[q]));
          rec.wplus_form_residual = worst / sc;
        }
      }
      if (want_identities) {
        rec.has_identities = true;
        rec.weitz_gap = weitzenboeck_gap(ws, c.scalar);
        rec.w2_identity_residual = std::abs(
            ws.norm_sq_plus - 2.0 * (ws.lambda_plus[0] * ws.lambda_plus[0] -
                                     ws.lambda_plus[1] * ws.lambda_plus[2]));
      }
      doc.points[i] = rec;
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (first_error.empty()) first_error = e.what();
    }
  });
  if (!first_error.empty()) throw InvalidArgument(first_error);

  // suite assertions
  auto add_suite = [&](const std::string& name, bool pass, double worst) {
    doc.suites.push_back({name, pass, worst});
    doc.pass = doc.pass && pass;
  };
  if (want_spectra) {
    double worst = 0.0;
    for (const auto& r : doc.points) {
      double sc = std::max(1.0, std::sqrt(r.norm_sq_plus));
      worst = std::max(worst, std::abs(r.lambda_plus[0] + r.lambda_plus[1] +
                                       r.lambda_plus[2]) / sc);
      double scm = std::max(1.0, std::sqrt(r.norm_sq_minus));
      worst = std::max(worst, std::abs(r.lambda_minus[0] + r.lambda_minus[1] +
                                       r.lambda_minus[2]) / scm);
    }
    add_suite("spectra", worst < 1e-9, worst);
  }
  if (want_pinch) {
    bool ok = true;
    for (const auto& r : doc.points) {
      if (std::sqrt(r.norm_sq_plus) <= 1e-8) continue;
      bool l2_nonpos = r.lambda_plus[1] <= 0.0;
      if (r.pinch.det_nonneg != r.pinch.sum13_nonneg) ok = false;
      if (std::abs(r.lambda_plus[1]) > 1e-10 * std::sqrt(r.norm_sq_plus) &&
          r.pinch.sum13_nonneg != l2_nonpos)
        ok = false;
    }
    add_suite("pinch", ok, 0.0);
  }
  if (want_kahler) {
    double worst = 0.0;
    for (const auto& r : doc.points) {
      double sc = std::max(1.0, std::abs(r.s));
      worst = std::max(worst, r.hall_murphy_residual / sc);
      if (model_kahler) {
        worst = std::max(worst, r.berger_residual / sc);
        worst = std::max(worst, std::abs(r.sstar_minus_s) / sc);
        worst = std::max(worst, r.wplus_form_residual);
      }
    }
    bool ok = true;
    for (const auto& r : doc.points) {
      double sc = std::max(1.0, std::abs(r.s));
      if (r.hall_murphy_residual > 1e-10 * sc) ok = false;
      if (model_kahler) {
        if (r.berger_residual > 1e-10 * sc) ok = false;
        if (std::abs(r.sstar_minus_s) > 1e-9 * sc) ok = false;
        if (r.wplus_form_residual > 1e-7) ok = false;
      }
    }
    add_suite("kahler", ok, worst);
  }
  if (want_identities) {
    bool ok = true;
    double worst = 0.0;
    for (const auto& r : doc.points) {
      double sc = std::max(1.0, r.norm_sq_plus);
      double res = r.w2_identity_residual / sc;
      worst = std::max(worst, res);
      if (res > 1e-10) ok = false;
      if (model_kahler) {
        double gsc = std::max(1.0, std::abs(r.s) * std::abs(r.s) * std::abs(r.s));
        if (std::abs(r.weitz_gap) > 1e-7 * gsc) ok = false;
      }
    }
    add_suite("identities", ok, worst);
  }
  if (want_invariants) {
    if (model && model->compact) {
      QuadratureAtlas atlas = atlas_for(*model, cfg.quadrature_order);
      doc.global = integrate_invariants(*model, atlas, cfg.orientation);
      doc.gl = gursky_lebrun_comparison(doc.global);
      doc.has_global = true;
      double rt = std::abs(doc.global.tau - std::round(doc.global.tau));
      double rc = std::abs(doc.global.chi - std::round(doc.global.chi));
      double worst = std::max(rt, rc);
      add_suite("invariants", worst < 1e-3, worst);
    } else {
      add_suite("invariants", true, 0.0); // skipped: non-compact or user metric
    }
  }
  return doc;
}

// ---- serialization ---------------------------------------------------

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') { out.push_back('\\'); out.push_back(c); }
    else if (c == '\n') out += "\\n";
    else out.push_back(c);
  }
  return out;
}

} // namespace detail

inline std::string report_to_json(const ReportDocument& doc) {
  using detail::fmt17;
  using detail::json_escape;
  std::ostringstream os;
  os << "{\n";
  os << "  \"schema\": " << doc.schema << ",\n";
  os << "  \"tool\": \"" << doc.tool << "\",\n";
  os << "  \"version\": \"" << doc.version << "\",\n";
  os << "  \"timestamp\": \"" << doc.timestamp << "\",\n";
  os << "  \"config\": \"" << json_escape(doc.config_canonical) << "\",\n";
  os << "  \"orientation\": " << doc.config.orientation << ",\n";
  os << "  \"points\": [\n";
  for (std::size_t i = 0; i < doc.points.size(); ++i) {
    const PointRecord& r = doc.points[i];
    os << "    {\"point\": [";
    for (int d = 0; d < 4; ++d)
      os << fmt17(r.point[d]) << (d < 3 ? ", " : "");
    os << "], \"s\": " << fmt17(r.s);
    os << ", \"lambda_plus\": [" << fmt17(r.lambda_plus[0]) << ", "
       << fmt17(r.lambda_plus[1]) << ", " << fmt17(r.lambda_plus[2]) << "]";
    os << ", \"lambda_minus\": [" << fmt17(r.lambda_minus[0]) << ", "
       << fmt17(r.lambda_minus[1]) << ", " << fmt17(r.lambda_minus[2]) << "]";
    os << ", \"norm_sq_plus\": " << fmt17(r.norm_sq_plus);
    os << ", \"norm_sq_minus\": " << fmt17(r.norm_sq_minus);
    os << ", \"det_plus\": " << fmt17(r.det_plus);
    os << ", \"det_minus\": " << fmt17(r.det_minus);
    os << ", \"degenerate_plus\": " << (r.degenerate_plus ? "true" : "false");
    os << ", \"degenerate_minus\": " << (r.degenerate_minus ? "true" : "false");
    os << ", \"ric0_frobenius\": " << fmt17(r.ric0_frobenius);
    if (r.has_pinch) {
      os << ", \"pinch\": {\"det_nonneg\": "
         << (r.pinch.det_nonneg ? "true" : "false")
         << ", \"sum13_nonneg\": " << (r.pinch.sum13_nonneg ? "true" : "false")
         << ", \"polombo_band\": " << (r.pinch.polombo_band ? "true" : "false")
         << ", \"gursky_band\": " << (r.pinch.gursky_band ? "true" : "false")
         << ", \"lambda2_sign\": " << r.pinch.lambda2_sign
         << ", \"margins\": {\"det\": " << fmt17(r.pinch.margins.det)
         << ", \"sum13\": " << fmt17(r.pinch.margins.sum13)
         << ", \"polombo_lo\": " << fmt17(r.pinch.margins.polombo_lo)
         << ", \"polombo_hi\": " << fmt17(r.pinch.margins.polombo_hi)
         << ", \"gursky\": " << fmt17(r.pinch.margins.gursky) << "}}";
    }
    if (r.has_kahler) {
      os << ", \"kahler\": {\"berger_residual\": " << fmt17(r.berger_residual)
         << ", \"hall_murphy_residual\": " << fmt17(r.hall_murphy_residual)
         << ", \"sstar_minus_s\": " << fmt17(r.sstar_minus_s)
         << ", \"wplus_form_residual\": " << fmt17(r.wplus_form_residual)
         << "}";
    }
    if (r.has_identities) {
      os << ", \"identities\": {\"weitzenboeck_gap\": " << fmt17(r.weitz_gap)
         << ", \"w2_identity_residual\": " << fmt17(r.w2_identity_residual)
         << "}";
    }
    os << "}" << (i + 1 < doc.points.size() ? "," : "") << "\n";
  }
  os << "  ],\n";
  if (doc.has_global) {
    os << "  \"global\": {\"tau\": " << fmt17(doc.global.tau)
       << ", \"chi\": " << fmt17(doc.global.chi)
       << ", \"chi_minus_3tau\": " << fmt17(doc.global.chi_minus_3tau)
       << ", \"volume\": " << fmt17(doc.global.volume)
       << ", \"int_wplus_sq\": " << fmt17(doc.global.int_wplus_sq)
       << ", \"int_wminus_sq\": " << fmt17(doc.global.int_wminus_sq)
       << ", \"int_s2_over_24\": " << fmt17(doc.global.int_s2_over_24)
       << ", \"gursky_lebrun_gap\": " << fmt17(doc.gl.gap)
       << ", \"node_count\": " << doc.global.node_count << "},\n";
  }
  os << "  \"suites\": [";
  for (std::size_t i = 0; i < doc.suites.size(); ++i) {
    os << "{\"name\": \"" << doc.suites[i].name << "\", \"pass\": "
       << (doc.suites[i].pass ? "true" : "false")
       << ", \"worst_residual\": " << fmt17(doc.suites[i].worst_residual) << "}"
       << (i + 1 < doc.suites.size() ? ", " : "");
  }
  os << "],\n";
  os << "  \"pass\": " << (doc.pass ? "true" : "false") << "\n";
  os << "}\n";
  return os.str();
}

inline std::string report_to_csv(const ReportDocument& doc) {
  using detail::fmt17;
  std::ostringstream os;
  os << "x1,x2,x3,x4,s,lambda1_plus,lambda2_plus,lambda3_plus,"
        "lambda1_minus,lambda2_minus,lambda3_minus,norm_sq_plus,"
        "norm_sq_minus,det_plus,det_minus,degenerate_plus,degenerate_minus,"
        "ric0_frobenius\n";
  for (const PointRecord& r : doc.points) {
    for (int d = 0; d < 4; ++d) os << fmt17(r.point[d]) << ",";
    os << fmt17(r.s) << "," << fmt17(r.lambda_plus[0]) << ","
       << fmt17(r.lambda_plus[1]) << "," << fmt17(r.lambda_plus[2]) << ","
       << fmt17(r.lambda_minus[0]) << "," << fmt17(r.lambda_minus[1]) << ","
       << fmt17(r.lambda_minus[2]) << "," << fmt17(r.norm_sq_plus) << ","
       << fmt17(r.norm_sq_minus) << "," << fmt17(r.det_plus) << ","
       << fmt17(r.det_minus) << "," << (r.degenerate_plus ? 1 : 0) << ","
       << (r.degenerate_minus ? 1 : 0) << "," << fmt17(r.ric0_frobenius)
       << "\n";
  }
  return os.str();
}

inline void write_report(const ReportDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write report to " + path);
  out << (doc.config.format == "csv" ? report_to_csv(doc) : report_to_json(doc));
}

} // namespace weylpinch

#endif
