#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "perfolab/config.hpp"
#include "perfolab/errors.hpp"
#include "perfolab/properties.hpp"
#include "perfolab/sweep.hpp"

using namespace perfolab;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("perfolab_harness_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> config_errors(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.errors();
  }
  return {};
}

bool any_contains(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

const char* kSmall = R"(
[operator]
type = laplace
[measure]
density = constant(200)
[load]
f = product_sine(1)
[sweep]
h = 3, 4
spacing = 1/64
)";

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const ScenarioConfig cfg = parse_config("[sweep]\nh = 4\n");
  CHECK(cfg.domain == Rect{0.0, 0.0, 1.0, 1.0});
  CHECK(cfg.op.is_laplace());
  CHECK(cfg.measure.is_zero());
  CHECK(cfg.h_list == std::vector<int>{4});
  REQUIRE(cfg.spacings.size() == 1);
  CHECK(cfg.spacings[0] == 1.0 / 256.0);
  CHECK(cfg.mode == SweepMode::kClassic);
  CHECK(cfg.seed == 20240917u);
  CHECK(cfg.rel_tol == 1e-10);
  CHECK_FALSE(cfg.pin_nearest);
}

TEST_CASE("full config") {
  const ScenarioConfig cfg = parse_config(R"(
# comment
[domain]
rect = 0, 0, 2, 1
[operator]
type = matrix
a11 = 1.5
a12 = 0.25
a22 = 1
alpha = 1/2
[measure]
density = radial(10, 0.5, 0.5, 1)
cap = 40
atoms = (0.51, 0.53, 1); (1.2, 0.4, 0.5)
segments = (0.1, 0.2, 0.9, 0.2, 3)
[load]
f = bump(2, 1, 0.5, 0.3)
[sweep]
h = 4, 6, 8
spacings = 1/256, 1/512, 1/1024
mode = singular
seed = 7
pin_nearest = true
)");
  CHECK(cfg.domain == Rect{0.0, 0.0, 2.0, 1.0});
  CHECK(cfg.op == EllipticOperator::matrix(1.5, 0.25, 1.0, 0.5));
  CHECK(cfg.measure.atoms.size() == 2);
  CHECK(cfg.measure.segments.size() == 1);
  CHECK(cfg.measure.density.cap == 40.0);
  CHECK(cfg.load.kind == LoadSpec::Kind::kBump);
  CHECK(cfg.spacings == std::vector<double>{1.0 / 256.0, 1.0 / 512.0, 1.0 / 1024.0});
  CHECK(cfg.finest_spacing() == 1.0 / 1024.0);
  CHECK(cfg.mode == SweepMode::kSingular);
  CHECK(cfg.seed == 7u);
  CHECK(cfg.pin_nearest);
}

TEST_CASE("config rejections") {
  CHECK(any_contains(config_errors("[measure]\natoms = (1.5, 0.5, 1)\n[sweep]\nh = 4\n"), "atom outside"));
  CHECK(any_contains(config_errors("[sweep]\nh = 4, 4\n"), "strictly increasing"));
  CHECK(any_contains(config_errors("[sweep]\nh = 6, 4\n"), "strictly increasing"));
  CHECK(any_contains(config_errors("[sweep]\nh = 4\nbogus = 1\n"), "line 3"));
  CHECK(any_contains(config_errors("[sweep]\nh = 4\nbogus = 1\n"), "bogus"));
  CHECK(any_contains(config_errors("[nowhere]\n"), "line 1"));
  CHECK(any_contains(config_errors("[sweep]\nthis is not a pair\n"), "line 2"));
  CHECK(any_contains(config_errors("[operator]\nalpha = 0\n[sweep]\nh = 4\n"), "alpha"));
  CHECK(any_contains(config_errors("[measure]\ndensity = constant(-1)\n"), "h is required"));
  CHECK(config_errors("[sweep]\nh = 4\nh = 5\n").size() >= 1);
  // Every problem is reported, not only the first.
  CHECK(config_errors("[sweep]\nh = 4, 4\nfoo = 1\nbar = 2\n").size() >= 3);
  CHECK_THROWS_AS(load_config("/nonexistent/scenario.ini"), IoError);
}

TEST_CASE("report emission") {
  ConvergenceReport empty{"classic", "zero", 1.0 / 64.0, 0.0, {}};
  CHECK(report_csv(empty) == "h,holes,min_radius,max_radius,spacing,l2_err,rel_l2_err,h1_err,energy,corrector_l2,runtime_ms\n");

  ConvergenceReport one = empty;
  one.rows.push_back(SweepRow{4, 4, 0.075616, 0.075616, 1.0 / 64.0, 0.01, 0.1, 0.2, 3.5, 0.3, 12.0, true, ""});
  const std::string csv = report_csv(one);
  CHECK(csv.back() == '\n');
  const auto nl = csv.find('\n');
  const std::string line = csv.substr(nl + 1, csv.size() - nl - 2);
  CHECK(std::count(line.begin(), line.end(), ',') == 10);
  CHECK(line.rfind("4,4,0.075616000000,", 0) == 0);
  CHECK(csv.find('\n', nl + 1) == csv.size() - 1);

  one.rows.push_back(SweepRow{6, 0, 0, 0, 1.0 / 64.0, NAN, NAN, NAN, NAN, NAN, 0, false, "did not converge"});
  const std::string json = report_json(one);
  CHECK(json.back() == '\n');
  const ConvergenceReport back = report_from_json(json);
  CHECK(back.rows.size() == 2);
  CHECK(back.rows[0] == one.rows[0]);
  CHECK(std::isnan(back.rows[1].l2_err));
  CHECK_FALSE(back.rows[1].ok);
  CHECK(back.rows[1].error == "did not converge");
  CHECK(report_json(back) == json);

  one.rows.pop_back();
  CHECK(report_from_json(report_json(one)) == one);

  const std::string path = temp_path("report.csv");
  emit_report(one, ReportFormat::kCsv, path);
  CHECK(slurp(path) == report_csv(one));
  std::remove(path.c_str());
  CHECK_THROWS_AS(emit_report(one, ReportFormat::kJson, "/nonexistent/dir/r.json"), IoError);
}

TEST_CASE("small sweep is deterministic and ordered") {
  const ScenarioConfig cfg = parse_config(kSmall);
  const SweepResult a = run_sweep(cfg, SweepOptions{false, false});
  const SweepResult b = run_sweep(cfg, SweepOptions{false, false});
  CHECK(report_csv(a.report) == report_csv(b.report));
  REQUIRE(a.report.rows.size() == 2);
  CHECK(a.report.rows[0].h == 3);
  CHECK(a.report.rows[1].h == 4);
  CHECK(a.report.all_ok());
  CHECK(a.report.rows[1].holes == 4);
  CHECK(a.report.rows[1].min_radius == doctest::Approx(0.075616).epsilon(1e-5));
  for (const auto& r : a.report.rows) {
    CHECK(r.runtime_ms == 0.0);
    CHECK(r.rel_l2_err > 0.0);
  }
  CHECK(a.report.rows[1].rel_l2_err < a.report.rows[0].rel_l2_err);
}

TEST_CASE("preflight rejects unresolved holes") {
  ScenarioConfig cfg = parse_config(kSmall);
  cfg.spacings = {1.0 / 16.0, 1.0 / 16.0};
  CHECK_THROWS_AS(preflight(cfg), ValidationError);
  CHECK_THROWS_AS(run_sweep(cfg), ValidationError);
  cfg.pin_nearest = true;
  CHECK_NOTHROW(preflight(cfg));
}

TEST_CASE("zero-measure sweep reproduces the unperforated solve") {
  const ScenarioConfig cfg = parse_config("[load]\nf = bump(3, 0.4, 0.5, 0.3)\n[sweep]\nh = 3, 5, 7\nspacing = 1/64\n");
  const SweepResult res = run_sweep(cfg, SweepOptions{false, true});
  const PdeSolution plain = solve_dirichlet(cfg.domain, cfg.op, cfg.load, 1.0 / 64.0);
  REQUIRE(res.solutions.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(res.report.rows[i].holes == 0);
    CHECK(res.solutions[i].values == plain.u.values);
    CHECK(res.report.rows[i].l2_err == res.report.rows[0].l2_err);
    CHECK(res.report.rows[i].corrector_l2 == 0.0);
  }
}

TEST_CASE("selftest reports a broken ellipticity constant") {
  CHECK_THROWS_AS(EllipticOperator(LaplaceCoefficient{}, 0.0), ValidationError);
  SelftestSummary s;
  s.checks.push_back({"a", true, ""});
  s.checks.push_back({"b", false, "why"});
  CHECK_FALSE(s.all_passed());
  CHECK(s.text().find("FAIL") != std::string::npos);
}
