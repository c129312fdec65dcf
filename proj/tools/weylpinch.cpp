// weylpinch: numerical laboratory for the curvature operator of oriented
// Riemannian four-manifolds. Subcommands:
//   analyze    pointwise spectra, pinching predicates, Kahler residuals
//   verify     named identity suites with per-check residuals
//   integrate  characteristic numbers over the compact model catalog
//   models     list the built-in chart catalog

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "weylpinch/report.hpp"
#include "weylpinch/verify.hpp"

namespace {

using namespace weylpinch;

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

Vec4 parse_point(const std::string& s) {
  std::vector<double> v = parse_csv_doubles(s);
  if (v.size() != 4)
    throw InvalidArgument("--point expects four comma-separated reals");
  return {v[0], v[1], v[2], v[3]};
}

GridSpec parse_grid(const std::string& counts, const std::string& bounds) {
  GridSpec g;
  std::stringstream ss(counts);
  std::string item;
  int idx = 0;
  while (std::getline(ss, item, 'x')) {
    if (idx >= 4) throw InvalidArgument("--grid expects NxNxNxN");
    g.counts[idx++] = std::stoi(item);
  }
  if (idx != 4) throw InvalidArgument("--grid expects NxNxNxN");
  if (!bounds.empty()) {
    g.has_bounds = true;
    std::stringstream bs(bounds);
    idx = 0;
    while (std::getline(bs, item, ',')) {
      if (idx >= 4) throw InvalidArgument("--bounds expects lo:hi,lo:hi,lo:hi,lo:hi");
      std::size_t colon = item.find(':');
      if (colon == std::string::npos)
        throw InvalidArgument("--bounds expects lo:hi,lo:hi,lo:hi,lo:hi");
      g.bounds[idx].first = std::stod(item.substr(0, colon));
      g.bounds[idx].second = std::stod(item.substr(colon + 1));
      ++idx;
    }
    if (idx != 4) throw InvalidArgument("--bounds expects four ranges");
  }
  return g;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_analyze(const AnalysisConfig& cfg) {
  ReportDocument doc = run_analyze(cfg);
  if (!cfg.output_path.empty()) {
    write_report(doc, cfg.output_path);
  } else {
    std::cout << (cfg.format == "csv" ? report_to_csv(doc)
                                      : report_to_json(doc));
  }
  for (const SuiteResult& s : doc.suites)
    std::fprintf(stderr, "suite %-12s %s (worst residual %.3g)\n",
                 s.name.c_str(), s.pass ? "PASS" : "FAIL", s.worst_residual);
  return doc.pass ? 0 : 1;
}

int cmd_verify(const std::string& suite, int budget) {
  VerifyResult r = run_verify(suite, budget);
  for (const VerifyCheck& c : r.checks) {
    if (c.tolerance > 0.0)
      std::printf("%-78s worst %.3e (tol %.0e): %s\n", c.label.c_str(), c.worst,
                  c.tolerance, c.pass ? "PASS" : "FAIL");
    else
      std::printf("%-78s %s\n", c.label.c_str(), c.pass ? "PASS" : "FAIL");
  }
  std::printf("verify %s: %s\n", suite.c_str(), r.pass ? "PASS" : "FAIL");
  return r.pass ? 0 : 1;
}

int cmd_integrate(const std::string& model_name, std::vector<double> params,
                  int order, int orientation) {
  BuiltinModel model = builtin_model_info(model_name, params);
  QuadratureAtlas atlas = atlas_for(model, order);
  InvariantReport rep = integrate_invariants(model, atlas, orientation);
  GurskyLebrunComparison gl = gursky_lebrun_comparison(rep);
  std::printf("model         %s (order %d, %zu nodes)\n", model_name.c_str(),
              order, rep.node_count);
  std::printf("volume        %.12g\n", rep.volume);
  std::printf("tau           %.12g\n", rep.tau);
  std::printf("chi           %.12g\n", rep.chi);
  std::printf("chi - 3 tau   %.12g\n", rep.chi_minus_3tau);
  std::printf("int |W+|^2    %.12g\n", rep.int_wplus_sq);
  std::printf("int |W-|^2    %.12g\n", rep.int_wminus_sq);
  std::printf("int s^2/24    %.12g\n", rep.int_s2_over_24);
  std::printf("GL gap        %.12g\n", gl.gap);
  return 0;
}

int cmd_models() {
  std::printf("built-in chart catalog (see MODELS.md for conventions):\n");
  std::printf("  flat_t4                   flat torus, coords periodic 2*pi\n");
  std::printf("  round_s4(r)               round 4-sphere, double-spherical chart\n");
  std::printf("  fubini_study_cp2(scale)   Fubini-Study, affine chart of C^2\n");
  std::printf("  product_s2xs2(r1, r2)     product of round 2-spheres\n");
  std::printf("  complex_hyperbolic_ch2(scale)  unit-ball chart (non-compact)\n");
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvature-operator laboratory for Riemannian four-manifolds"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "pointwise analysis suites");
  std::string model, metric_path, grid_str, bounds_str, suites_str = "spectra";
  std::string params_str, output, format = "json", backend = "hyperdual";
  std::vector<std::string> point_strs;
  int orientation = 1, order = 16;
  analyze->add_option("--model", model, "built-in model name");
  analyze->add_option("--params", params_str, "model parameters, comma separated");
  analyze->add_option("--metric", metric_path, "metric spec file");
  analyze->add_option("--point", point_strs, "explicit point x1,x2,x3,x4")
      ->take_all();
  analyze->add_option("--grid", grid_str, "grid counts NxNxNxN");
  analyze->add_option("--bounds", bounds_str, "grid bounds lo:hi,... per axis");
  analyze->add_option("--orientation", orientation, "+1 or -1");
  analyze->add_option("--suites", suites_str,
                      "subset of spectra,pinch,kahler,invariants,identities or all");
  analyze->add_option("--order", order, "quadrature order for invariants");
  analyze->add_option("--output", output, "report output path");
  analyze->add_option("--format", format, "json or csv");
  analyze->add_option("--backend", backend, "hyperdual or fd");

  // verify
  auto* verify = app.add_subcommand("verify", "identity verification suites");
  std::string suite = "all";
  int budget = 100000;
  verify->add_option("suite", suite,
                     "all|lemma1|lemma2|lemma3|prop2|berger|hall_murphy|psi|"
                     "weitzenboeck|signature|chi");
  verify->add_option("--budget", budget, "sample budget for sweep suites");

  // integrate
  auto* integrate = app.add_subcommand("integrate", "characteristic numbers");
  std::string imodel;
  std::string iparams_str;
  int iorder = 32, iorientation = 1;
  integrate->add_option("--model", imodel, "compact model name")->required();
  integrate->add_option("--params", iparams_str, "model parameters");
  integrate->add_option("--order", iorder, "per-axis quadrature order");
  integrate->add_option("--orientation", iorientation, "+1 or -1");

  // models
  app.add_subcommand("models", "list the built-in catalog");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("models")) return cmd_models();
    if (app.got_subcommand("verify")) return cmd_verify(suite, budget);
    if (app.got_subcommand("integrate"))
      return cmd_integrate(imodel, parse_csv_doubles(iparams_str), iorder,
                           iorientation);
    if (app.got_subcommand("analyze")) {
      AnalysisConfig cfg;
      cfg.model = model;
      cfg.params = parse_csv_doubles(params_str);
      cfg.metric_path = metric_path;
      for (const auto& p : point_strs) cfg.points.push_back(parse_point(p));
      if (!grid_str.empty()) cfg.grid = parse_grid(grid_str, bounds_str);
      if (orientation != 1 && orientation != -1)
        throw InvalidArgument("--orientation must be +1 or -1");
      cfg.orientation = orientation;
      cfg.suites = split_csv(suites_str);
      cfg.quadrature_order = order;
      cfg.output_path = output;
      if (format != "json" && format != "csv")
        throw InvalidArgument("--format must be json or csv");
      cfg.format = format;
      if (backend == "hyperdual") cfg.backend = DerivativeBackend::hyperdual;
      else if (backend == "fd") cfg.backend = DerivativeBackend::finite_difference;
      else throw InvalidArgument("--backend must be hyperdual or fd");
      return cmd_analyze(cfg);
    }
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ChartDomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
