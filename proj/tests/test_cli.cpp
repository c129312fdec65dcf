#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "weylpinch/report.hpp"
#include "weylpinch/verify.hpp"

using namespace weylpinch;

namespace {

const char* cli_path() { return WEYLPINCH_CLI_PATH; }

int run_cli(const std::string& args, const std::string& stdout_path = "") {
  std::string cmd = std::string(cli_path()) + " " + args;
  if (!stdout_path.empty()) cmd += " > " + stdout_path + " 2>/dev/null";
  else cmd += " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.find("\"timestamp\"") == std::string::npos) out << line << "\n";
  return out.str();
}

std::string tmp_file(const char* name) {
  return std::string("/tmp/weylpinch_test_") + name;
}

} // namespace

TEST_CASE("cli: models and verify smoke") {
  CHECK(run_cli("models") == 0);
  CHECK(run_cli("verify psi --budget 2000") == 0);
  CHECK(run_cli("verify nonsense") == 2);
}

TEST_CASE("cli: integrate flat torus") {
  std::string out = tmp_file("integrate.txt");
  CHECK(run_cli("integrate --model flat_t4 --order 8", out) == 0);
  std::string text = slurp(out);
  CHECK(text.find("tau") != std::string::npos);
  CHECK(run_cli("integrate --model complex_hyperbolic_ch2 --order 8") == 2);
}

TEST_CASE("cli: analyze reports are byte-deterministic") {
  std::string out1 = tmp_file("rep1.json");
  std::string out2 = tmp_file("rep2.json");
  std::string args =
      "analyze --model fubini_study_cp2 --suites spectra,pinch,kahler "
      "--grid 3x3x3x3 --output ";
  CHECK(run_cli(args + out1) == 0);
  CHECK(run_cli(args + out2) == 0);
  std::string a = strip_timestamp(slurp(out1));
  std::string b = strip_timestamp(slurp(out2));
  CHECK(a == b);
  // a Kahler model has a degenerate self-dual spectrum at all 81 grid points
  std::size_t degenerate_count = 0, pos = 0;
  while ((pos = a.find("\"degenerate_plus\": true", pos)) != std::string::npos) {
    ++degenerate_count;
    pos += 10;
  }
  CHECK(degenerate_count == 81);
  CHECK(a.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("finite-difference backend drives the same analysis") {
  AnalysisConfig cfg;
  cfg.model = "product_s2xs2";
  cfg.params = {1.0, 1.0};
  cfg.backend = DerivativeBackend::finite_difference;
  cfg.points.push_back({1.2, 0.4, 1.7, 2.0});
  cfg.suites = {"spectra"};
  ReportDocument doc = run_analyze(cfg);
  CHECK(doc.pass);
  CHECK(doc.points[0].s == doctest::Approx(4.0).epsilon(1e-7));
  CHECK(doc.points[0].lambda_minus[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("cli: reports are bit-identical across thread counts") {
  std::string out1 = tmp_file("thr1.json");
  std::string out2 = tmp_file("thr2.json");
  std::string args =
      " analyze --model product_s2xs2 --params 1,2 --suites spectra,invariants "
      "--order 8 --grid 2x2x2x2 --output ";
  std::string cmd1 = "WEYLPINCH_THREADS=1 " + std::string(cli_path()) + args +
                     out1 + " > /dev/null 2>&1";
  std::string cmd2 = "WEYLPINCH_THREADS=2 " + std::string(cli_path()) + args +
                     out2 + " > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd1.c_str())) == 0);
  CHECK(WEXITSTATUS(std::system(cmd2.c_str())) == 0);
  CHECK(strip_timestamp(slurp(out1)) == strip_timestamp(slurp(out2)));
}

TEST_CASE("cli: csv format flattens one row per point") {
  std::string out = tmp_file("rep.csv");
  CHECK(run_cli("analyze --model flat_t4 --grid 2x2x2x2 --format csv --output " +
                out) == 0);
  std::string text = slurp(out);
  int rows = 0;
  for (char c : text)
    if (c == '\n') ++rows;
  CHECK(rows == 17); // header + 16 points
}

TEST_CASE("cli: user metric single point") {
  std::string mpath = tmp_file("user.metric");
  {
    std::ofstream m(mpath);
    m << "coords: x1 x2 x3 x4\n";
    m << "g[1][1] = 1\ng[2][2] = 1\ng[3][3] = 1\ng[4][4] = 1\n";
    m << "g[1][2] = 0.1*sin(x3)\n";
  }
  std::string out = tmp_file("user.json");
  CHECK(run_cli("analyze --metric " + mpath +
                " --point 0.3,0.1,0.2,0.4 --suites spectra --output " + out) == 0);
  std::string text = slurp(out);
  CHECK(text.find("\"lambda_plus\"") != std::string::npos);
}

TEST_CASE("cli: invalid configs exit 2") {
  CHECK(run_cli("analyze --model nonsense --point 0,0,0,0") == 2);
  CHECK(run_cli("analyze --model flat_t4") == 2); // no points
  CHECK(run_cli("analyze --model flat_t4 --point 0,0,0,0 --format yaml") == 2);
  CHECK(run_cli("analyze --model round_s4 --point 0,1,1,1") == 2); // pole
  std::string mpath = tmp_file("bad.metric");
  {
    std::ofstream m(mpath);
    m << "coords: x1 x2 x3 x4\ng[1][1] = 1 +\n";
  }
  CHECK(run_cli("analyze --metric " + mpath + " --point 0,0,0,0") == 2);
}

TEST_CASE("cli: failing suite exits 1 but still writes the report") {
  // with the reversed orientation the self-dual block of a Kahler model
  // is no longer (-s/12, -s/12, s/6), so the kahler suite fails honestly
  std::string out = tmp_file("fail.json");
  std::remove(out.c_str());
  int rc = run_cli(
      "analyze --model fubini_study_cp2 --suites kahler --orientation -1 "
      "--point 0.3,0.1,0.2,0.4 --output " + out);
  CHECK(rc == 1);
  std::string text = slurp(out);
  CHECK(!text.empty());
  CHECK(text.find("\"pass\": false") != std::string::npos);
}

TEST_CASE("library-level determinism of the json writer") {
  AnalysisConfig cfg;
  cfg.model = "product_s2xs2";
  cfg.params = {1.0, 2.0};
  cfg.points.push_back({1.0, 2.0, 1.5, 3.0});
  cfg.suites = {"spectra", "pinch", "identities"};
  ReportDocument d1 = run_analyze(cfg);
  ReportDocument d2 = run_analyze(cfg);
  CHECK(strip_timestamp(report_to_json(d1)) == strip_timestamp(report_to_json(d2)));
  CHECK(d1.pass);
}

TEST_CASE("report grid ordering is lexicographic") {
  AnalysisConfig cfg;
  cfg.model = "flat_t4";
  GridSpec g;
  g.counts = {2, 1, 1, 2};
  cfg.grid = g;
  ReportDocument doc = run_analyze(cfg);
  REQUIRE(doc.points.size() == 4);
  CHECK(doc.points[0].point[0] <= doc.points[2].point[0]);
  CHECK(doc.points[0].point[3] <= doc.points[1].point[3]);
}
