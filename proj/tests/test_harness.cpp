#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "drumlab/calibrate.hpp"
#include "drumlab/config.hpp"
#include "drumlab/harness.hpp"
#include "drumlab/report.hpp"
#include "oracle_helpers.hpp"

using namespace drumlab;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const std::string& name) {
  std::string d = "test_out/" + name;
  fs::remove_all(d);
  return d;
}

const char* kSolveConfig = R"(
seed = 7

[domain]
kind = "convex_polygon"
vertices = [[0, 0], [1, 0], [1, 1], [0, 1]]

[grid]
h = 0.03125

[solver]
tol = 1e-7
)";

}  // namespace

TEST_CASE("config parsing covers every section") {
  const char* text = R"(
seed = 11

[domain]
kind = "disc"
center = [0.5, 0.5]
radius = 0.4

[obstacle]
kind = "convex_polygon"
vertices = [[0, 0], [0.1, 0], [0.1, 0.1], [0, 0.1]]

[grid]
h = 0.05
box = [[0, 0], [1, 1]]

[solver]
tol = 1e-6
max_iter = 300

[sweep]
lattice_step = 0.1
refine_shrink = 0.25
refine_levels = 2

[heart]
n_directions = 90
tol = 1e-4

[asymmetry]
n_boundary = 64
n_radii = 8
n_samples = 500
min_radius = 0.01

[output]
dir = "custom_out"

[constants]
profile = "analytic-2d"
)";
  ExperimentConfig c = parse_config_text(text, "inline");
  CHECK(c.seed == 11);
  CHECK(c.has_domain);
  CHECK(c.domain.is_disc());
  CHECK(c.domain.disc_radius() == 0.4);
  REQUIRE(c.obstacle.has_value());
  CHECK(c.obstacle->vertices().size() == 4);
  CHECK(c.h == 0.05);
  REQUIRE(c.grid_box.has_value());
  CHECK(c.grid_box->hi.x == 1.0);
  CHECK(c.tol == 1e-6);
  CHECK(c.max_iter == 300);
  CHECK(c.lattice_step == 0.1);
  CHECK(c.refine_shrink == 0.25);
  CHECK(c.refine_levels == 2);
  CHECK(c.heart_directions == 90);
  CHECK(c.heart_tol == 1e-4);
  CHECK(c.asym_boundary == 64);
  CHECK(c.asym_radii == 8);
  CHECK(c.asym_samples == 500);
  CHECK(c.asym_min_radius == 0.01);
  CHECK(c.out_dir == "custom_out");
  CHECK(c.constants_profile == "analytic-2d");
}

TEST_CASE("config errors name the offending key and line") {
  // missing kind
  try {
    parse_config_text("[domain]\nradius = 1\n", "bad.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("kind") != std::string::npos);
  }

  // unknown key carries its location
  try {
    parse_config_text("[domain]\nkind = \"disc\"\nradius = 1\nfrobnicate = 3\n",
                      "bad.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("frobnicate") != std::string::npos);
    CHECK(msg.find("4") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_config_text("[domain]\nkind = \"pentagram\"\n", "x"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("[nonsense]\nx = 1\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[grid]\nh = -0.1\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[domain]\nkind = \"disc\"\nradius = \n", "x"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_file("does/not/exist.cfg"), ConfigError);
}

TEST_CASE("solve run writes its records and reproduces byte-for-byte") {
  ExperimentConfig cfg = parse_config_text(kSolveConfig, "inline");
  cfg.out_dir = fresh_dir("solve_a");
  REQUIRE(run_solve(cfg) == 0);

  for (const char* f :
       {"solve.json", "mask.pgm", "phi.pgm", "contours.svg", "manifest.json"})
    CHECK(fs::exists(fs::path(cfg.out_dir) / f));

  auto rec = ordered_json::parse(read_text_file(cfg.out_dir + "/solve.json"));
  const double lam = rec["lambda_extrap"].get<double>();
  CHECK(std::abs(lam - 2 * oracle::pi * oracle::pi) <= 0.01 * lam);
  CHECK(rec["fine"]["h"].get<double>() == 0.015625);

  // manifest names every artifact the run produced
  auto man = ordered_json::parse(read_text_file(cfg.out_dir + "/manifest.json"));
  std::set<std::string> listed;
  for (const auto& o : man["outputs"]) listed.insert(o.get<std::string>());
  for (const char* f : {"solve.json", "mask.pgm", "phi.pgm", "contours.svg"})
    CHECK(listed.count(f) == 1);
  CHECK(man["seed"].get<std::uint64_t>() == 7);

  // identical config, separate run: identical data products
  ExperimentConfig cfg2 = parse_config_text(kSolveConfig, "inline");
  cfg2.out_dir = fresh_dir("solve_b");
  REQUIRE(run_solve(cfg2) == 0);
  for (const char* f : {"solve.json", "mask.pgm", "phi.pgm", "contours.svg"})
    CHECK(read_text_file(cfg.out_dir + "/" + f) ==
          read_text_file(cfg2.out_dir + "/" + f));
}

TEST_CASE("sweep run emits the landscape and passing checks") {
  const char* text = R"(
[domain]
kind = "convex_polygon"
vertices = [[0, 0], [1, 0], [1, 1], [0, 1]]

[obstacle]
kind = "disc"
radius = 0.15

[grid]
h = 0.0625

[solver]
tol = 1e-6

[sweep]
lattice_step = 0.25
)";
  ExperimentConfig cfg = parse_config_text(text, "inline");
  cfg.out_dir = fresh_dir("sweep_a");
  REQUIRE(run_sweep(cfg, 1) == 0);

  CHECK(fs::exists(fs::path(cfg.out_dir) / "landscape.csv"));
  CHECK(fs::exists(fs::path(cfg.out_dir) / "landscape.svg"));
  auto rec = ordered_json::parse(read_text_file(cfg.out_dir + "/sweep.json"));
  CHECK(rec["landscape"]["mu"].get<double>() >
        rec["landscape"]["lambda1_domain"].get<double>());
  CHECK(rec["checks"]["hkk_vertical"]["pass"].get<bool>());
  CHECK(rec["checks"]["hkk_horizontal"]["pass"].get<bool>());
  CHECK(rec["checks"]["heart_membership"]["pass"].get<bool>());

  // reproducibility of the CSV data product
  ExperimentConfig cfg2 = parse_config_text(text, "inline");
  cfg2.out_dir = fresh_dir("sweep_b");
  REQUIRE(run_sweep(cfg2, 1) == 0);
  CHECK(read_text_file(cfg.out_dir + "/landscape.csv") ==
        read_text_file(cfg2.out_dir + "/landscape.csv"));
}

TEST_CASE("sweep run requires an obstacle section") {
  ExperimentConfig cfg = parse_config_text(kSolveConfig, "inline");
  cfg.out_dir = fresh_dir("sweep_noobst");
  CHECK_THROWS_AS(run_sweep(cfg, 1), ConfigError);
}

TEST_CASE("heart and asymmetry runs") {
  const char* text = R"(
[domain]
kind = "convex_polygon"
vertices = [[0, 0], [4, 0], [1, 2]]

[grid]
h = 0.125

[solver]
tol = 1e-6

[heart]
n_directions = 180
tol = 1e-4

[asymmetry]
n_boundary = 60
n_radii = 8
n_samples = 600
)";
  ExperimentConfig cfg = parse_config_text(text, "inline");
  cfg.out_dir = fresh_dir("heart_a");
  REQUIRE(run_heart(cfg) == 0);
  auto hj = ordered_json::parse(read_text_file(cfg.out_dir + "/heart.json"));
  CHECK(hj["membership"]["pass"].get<bool>());
  CHECK_FALSE(hj["heart"]["degenerate"].get<bool>());
  CHECK(fs::exists(fs::path(cfg.out_dir) / "heart.svg"));

  cfg.out_dir = fresh_dir("asym_a");
  REQUIRE(run_asymmetry(cfg) == 0);
  auto aj = ordered_json::parse(read_text_file(cfg.out_dir + "/asymmetry.json"));
  const double alpha = aj["alpha"].get<double>();
  CHECK(alpha > 0.3);  // convex shapes sit near one half
  CHECK(alpha <= 0.62);

  cfg.out_dir = fresh_dir("asym_b");
  REQUIRE(run_asymmetry(cfg) == 0);
  CHECK(read_text_file("test_out/asym_a/asymmetry.json") ==
        read_text_file("test_out/asym_b/asymmetry.json"));
}

TEST_CASE("constants profile JSON round-trips with provenance") {
  ConstantsProfile p = ConstantsProfile::analytic_2d();
  ordered_json j = constants_json(p);
  ConstantsProfile q = constants_from_json(j);
  CHECK(q.c0 == p.c0);
  CHECK(q.r0 == p.r0);
  CHECK(q.beta0 == p.beta0);
  CHECK(q.C0 == p.C0);
  CHECK(q.C1 == p.C1);
  CHECK(q.C2 == p.C2);
  CHECK(q.omega_n == p.omega_n);
  CHECK(q.c0_prov == p.c0_prov);
  CHECK(q.r0_prov == p.r0_prov);
  CHECK(constants_json(q) == j);
}

TEST_CASE("bound report serializes with a fixed key set") {
  BoundReport b;
  b.lambda1_domain = 1;
  ordered_json j = bound_report_json(b);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> expected = {
      "lambda1_domain", "lambda1_complement", "rho_x",          "rho0",
      "beta",           "ball_bound",         "mechanism_pass", "stated_bound_pass",
      "slack_mechanism", "slack_stated"};
  CHECK(keys == expected);
}

TEST_CASE("calibration pins the profile constants from a family") {
  std::vector<std::pair<std::string, Shape>> family = {
      {"square", Shape::rectangle(0, 0, 1, 1)},
      {"disc", Shape::disc({0, 0}, 1.0)},
      {"rect12", Shape::rectangle(0, 0, 1, 2)},
      {"rect14", Shape::rectangle(0, 0, 1, 4)},
      {"equilateral",
       Shape::convex_polygon({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}})},
  };
  CalibrationResult cal = calibrate(family, 1.0 / 32, 1e-6);
  CHECK(cal.profile.r0 > 0.0);
  CHECK(cal.profile.C1 > 0.0);
  // the disc attains the largest scaled inradius, close to the Bessel zero
  CHECK(cal.profile.C2 <= oracle::j0_first_zero() * 1.01);
  CHECK(cal.profile.C2 >= 2.2);
  CHECK(cal.profile.r0_prov == Provenance::Calibrated);
  CHECK(cal.profile.c0_prov == Provenance::Analytic);
  double worst = 0.0;
  for (const auto& e : cal.entries)
    if (e.name == "disc") worst = e.scaled_inradius;
  CHECK(worst == Catch::Approx(cal.profile.C2));

  // too small a family and non-convex members are rejected
  std::vector<std::pair<std::string, Shape>> tiny(family.begin(), family.begin() + 1);
  CHECK_THROWS_AS(calibrate(tiny, 1.0 / 32, 1e-6), std::invalid_argument);
}

TEST_CASE("verify suites map to criteria and reject unknown names") {
  CHECK(suite_ids("oracle") == std::vector<int>{1, 2, 12});
  CHECK(suite_ids("monotonicity") == std::vector<int>{3});
  CHECK(suite_ids("hkk") == std::vector<int>{5});
  CHECK(suite_ids("all").size() == 12);
  CHECK_THROWS_AS(suite_ids("bogus"), std::invalid_argument);
}

TEST_CASE("shape descriptions round-trip through config text") {
  ExperimentConfig c = parse_config_text(
      "[domain]\nkind = \"disc\"\nradius = 2.5\ncenter = [1, -1]\n", "inline");
  CHECK(c.domain.is_disc());
  CHECK(c.domain.disc_radius() == 2.5);
  CHECK(c.domain.disc_center().x == 1.0);
  CHECK(c.domain.disc_center().y == -1.0);

  // default domain is the unit square
  ExperimentConfig d = parse_config_text("seed = 1\n", "inline");
  CHECK_FALSE(d.has_domain);
  CHECK(d.domain.area() == Catch::Approx(1.0));
}
