#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "drumlab/calibrate.hpp"
#include "drumlab/config.hpp"
#include "drumlab/report.hpp"
#include "drumlab/svg.hpp"
#include "drumlab/verify.hpp"

namespace drumlab {

namespace harness {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

class OutputDir {
 public:
  OutputDir(const ExperimentConfig& cfg, std::string command)
      : dir_(cfg.out_dir), manifest_{std::move(command), hex64(fnv1a64(cfg.raw_text)),
                                     cfg.seed, {}, {}} {
    std::filesystem::create_directories(dir_);
  }

  std::string write(const std::string& name, const std::string& content) {
    const std::string path = (std::filesystem::path(dir_) / name).string();
    write_text_file(path, content);
    manifest_.outputs.push_back(name);
    return path;
  }

  void time(const std::string& label, double seconds) {
    manifest_.timings_s.emplace_back(label, seconds);
  }

  void finish() {
    const std::string path = (std::filesystem::path(dir_) / "manifest.json").string();
    write_text_file(path, manifest_json(manifest_).dump(2) + "\n");
  }

 private:
  std::string dir_;
  RunManifest manifest_;
};

inline void require_domain(const ExperimentConfig& cfg) {
  if (!cfg.has_domain) throw ConfigError("config has no [domain] section");
}

}  // namespace harness

inline int run_solve(const ExperimentConfig& cfg) {
  harness::require_domain(cfg);
  harness::OutputDir out(cfg, "solve");
  std::optional<Translate> obstacle;
  if (cfg.obstacle) obstacle = Translate{*cfg.obstacle, {0, 0}};

  const GridSpec coarse = cfg.make_grid(cfg.domain);
  const GridSpec fine(coarse.box_lo, coarse.box_hi, coarse.h / 2);

  harness::Timer t1;
  const SpectralResult rc = solve_shape(cfg.domain, obstacle, coarse, cfg.tol, cfg.max_iter);
  out.time("solve_coarse", t1.s());
  harness::Timer t2;
  const SpectralResult rf = solve_shape(cfg.domain, obstacle, fine, cfg.tol, cfg.max_iter);
  out.time("solve_fine", t2.s());
  const Extrapolation ex = refine_extrapolate(rc.lambda1, rf.lambda1);

  ordered_json j;
  j["coarse"] = spectral_record(rc);
  j["fine"] = spectral_record(rf);
  j["lambda_extrap"] = json_num(ex.lambda_extrap);
  out.write("solve.json", j.dump(2) + "\n");
  out.write("mask.pgm", mask_to_pgm(*rf.mask));
  out.write("phi.pgm", field_to_pgm(*rf.mask, rf.phi));
  out.write("contours.svg", contour_svg(rf));
  out.finish();
  std::cout << "lambda1 = " << rf.lambda1 << " (extrapolated " << ex.lambda_extrap << ")\n";
  return 0;
}

inline int run_sweep(const ExperimentConfig& cfg, int jobs) {
  harness::require_domain(cfg);
  if (!cfg.obstacle) throw ConfigError("sweep needs an [obstacle] section");
  harness::OutputDir out(cfg, "sweep");
  const GridSpec grid = cfg.make_grid(cfg.domain);

  harness::Timer tsweep;
  const PlacementLandscape L =
      sweep(cfg.domain, *cfg.obstacle, cfg.lattice_step, grid, cfg.tol, jobs);
  out.time("sweep", tsweep.s());

  out.write("landscape.csv", landscape_to_csv(L));
  out.write("landscape.svg", landscape_svg(L));

  ordered_json checks;
  bool any_fail = false;
  auto record = [&](const std::string& name, const ordered_json& rep, bool pass) {
    checks[name] = rep;
    if (!pass) any_fail = true;
  };
  auto skip = [&](const std::string& name, const std::string& why) {
    checks[name] = "skipped: " + why;
  };

  harness::Timer tchecks;
  const SpectralResult dom = solve_shape(cfg.domain, std::nullopt, grid, cfg.tol);
  const MaxSet M = max_set(dom);

  const BBox bb = cfg.domain.bbox();
  const Vec2 c = bb.center();
  if (cfg.obstacle->is_disc()) {
    try {
      const HkkReport r = hkk_check(L, Hyperplane2D({1, 0}, c.x));
      record("hkk_vertical", hkk_json(r), r.pass);
    } catch (const std::invalid_argument& e) {
      skip("hkk_vertical", e.what());
    }
    try {
      const HkkReport r = hkk_check(L, Hyperplane2D({0, 1}, c.y));
      record("hkk_horizontal", hkk_json(r), r.pass);
    } catch (const std::invalid_argument& e) {
      skip("hkk_horizontal", e.what());
    }
  } else {
    skip("hkk_vertical", "obstacle is not a disc");
    skip("hkk_horizontal", "obstacle is not a disc");
  }

  const ConstantsProfile consts = load_constants(cfg.constants_profile);
  {
    const LocalizationReport r = localization_check(L, M, consts);
    record("localization", localization_json(r), r.pass);
  }
  try {
    const ContainmentReport r = convex_containment_check(L, M, consts);
    record("containment", containment_json(r), r.pass);
  } catch (const std::invalid_argument& e) {
    skip("containment", e.what());
  }
  if (cfg.domain.is_convex()) {
    const HeartResult hr = heart(cfg.domain, cfg.heart_directions, cfg.heart_tol);
    const HeartMembershipReport r =
        heart_membership_check(M, hr, grid.h + cfg.heart_tol);
    record("heart_membership", heart_membership_json(r), r.pass);
  } else {
    skip("heart_membership", "domain is not convex");
  }

  // main bound at each argmax offset
  ordered_json bounds = ordered_json::array();
  for (const PlacementEntry& e : L.entries) {
    if (!e.admissible || e.lambda1 < L.mu * (1.0 - kPlacementTieRel)) continue;
    const Translate t{L.obstacle, e.offset};
    ordered_json item;
    item["offset"] = {json_num(e.offset.x), json_num(e.offset.y)};
    if (rho(t, M) > 0.0) {
      SpectralResult synth;
      synth.lambda1 = e.lambda1;
      synth.mask = std::make_shared<const DomainMask>(
          detail::rasterize_unchecked(cfg.domain, t, grid));
      const BoundReport rep = check_main_bound(dom, synth, t, consts);
      item["report"] = bound_report_json(rep);
      if (!rep.mechanism_pass || !rep.stated_bound_pass) any_fail = true;
    } else {
      item["report"] = "skipped: obstacle covers the max point set";
    }
    bounds.push_back(item);
  }
  checks["main_bound_at_argmax"] = bounds;
  out.time("checks", tchecks.s());

  if (cfg.refine_levels > 0) {
    harness::Timer tref;
    const RefinedMax rm = refine_maximizer(L, cfg.refine_shrink, cfg.refine_levels, jobs);
    out.time("refine", tref.s());
    ordered_json rj;
    rj["offset"] = {json_num(rm.offset.x), json_num(rm.offset.y)};
    rj["lambda1"] = json_num(rm.lambda1);
    checks["refined_maximizer"] = rj;
  }

  ordered_json summary;
  summary["landscape"] = landscape_summary_json(L);
  summary["checks"] = checks;
  out.write("sweep.json", summary.dump(2) + "\n");
  out.finish();
  std::cout << "mu = " << L.mu << " over " << L.entries.size() << " offsets ("
            << L.argmax.size() << " argmax)\n";
  return any_fail ? 1 : 0;
}

inline int run_heart(const ExperimentConfig& cfg) {
  harness::require_domain(cfg);
  harness::OutputDir out(cfg, "heart");
  harness::Timer th;
  const HeartResult hr = heart(cfg.domain, cfg.heart_directions, cfg.heart_tol);
  out.time("heart", th.s());

  harness::Timer ts;
  const SpectralResult r =
      solve_shape(cfg.domain, std::nullopt, cfg.make_grid(cfg.domain), cfg.tol);
  out.time("solve", ts.s());
  const MaxSet M = max_set(r);
  const HeartMembershipReport rep =
      heart_membership_check(M, hr, cfg.make_grid(cfg.domain).h + cfg.heart_tol);

  ordered_json j;
  j["heart"] = heart_json(hr);
  j["lambda1"] = json_num(r.lambda1);
  ordered_json pts = ordered_json::array();
  for (const Vec2& p : M.points) pts.push_back({json_num(p.x), json_num(p.y)});
  j["max_set"] = pts;
  j["membership"] = heart_membership_json(rep);
  out.write("heart.json", j.dump(2) + "\n");
  out.write("heart.svg", heart_svg(cfg.domain, hr, M.points));
  out.finish();
  std::cout << "heart " << (hr.degenerate ? "degenerate at " : "about ") << "("
            << hr.point.x << ", " << hr.point.y << "), membership "
            << (rep.pass ? "ok" : "FAILED") << "\n";
  return rep.pass ? 0 : 1;
}

inline int run_asymmetry(const ExperimentConfig& cfg) {
  harness::require_domain(cfg);
  harness::OutputDir out(cfg, "asymmetry");
  harness::Timer t;
  const AsymmetryEstimate est =
      estimate_asymmetry_detail(cfg.domain, cfg.asym_boundary, cfg.asym_radii,
                                cfg.asym_samples, cfg.seed, cfg.asym_min_radius);
  out.time("asymmetry", t.s());
  ordered_json j = asymmetry_json(est);
  j["n_boundary"] = cfg.asym_boundary;
  j["n_radii"] = cfg.asym_radii;
  j["n_samples"] = cfg.asym_samples;
  j["seed"] = cfg.seed;
  out.write("asymmetry.json", j.dump(2) + "\n");
  out.finish();
  std::cout << "alpha = " << est.alpha << "\n";
  return 0;
}

inline int run_calibrate(const ExperimentConfig& cfg) {
  if (cfg.family.size() < 5)
    throw ConfigError("calibrate needs at least 5 [family.*] sections");
  harness::OutputDir out(cfg, "calibrate");
  harness::Timer t;
  const CalibrationResult cal = calibrate(cfg.family, cfg.h, cfg.tol);
  out.time("calibrate", t.s());

  out.write("constants_profile.json", constants_json(cal.profile).dump(2) + "\n");
  ordered_json j;
  j["h"] = json_num(cal.h);
  j["tol"] = json_num(cal.tol);
  ordered_json entries = ordered_json::array();
  for (const CalibrationEntry& e : cal.entries) {
    ordered_json ej;
    ej["name"] = e.name;
    ej["lambda1"] = json_num(e.lambda1);
    ej["max_point"] = {json_num(e.max_point.x), json_num(e.max_point.y)};
    ej["max_point_clearance"] = json_num(e.max_point_clearance);
    ej["inradius"] = json_num(e.inradius);
    ej["scaled_clearance"] = json_num(e.scaled_clearance);
    ej["scaled_inradius"] = json_num(e.scaled_inradius);
    entries.push_back(ej);
  }
  j["family"] = entries;
  out.write("calibration.json", j.dump(2) + "\n");
  out.finish();
  std::cout << "r0 = " << cal.profile.r0 << ", C1 = " << cal.profile.C1
            << ", C2 = " << cal.profile.C2 << ", beta0 = " << cal.profile.beta0 << "\n";
  return 0;
}

inline int run_verify(const std::string& suite, int jobs, const std::string& out_dir) {
  VerifyContext ctx(jobs);
  const std::vector<CheckResult> results = run_suite(suite, ctx);
  bool all_pass = true;
  ordered_json arr = ordered_json::array();
  for (const CheckResult& r : results) {
    std::cout << "criterion " << r.id << " (" << r.name << "): "
              << (r.pass ? "PASS" : "FAIL") << " - " << r.detail << "\n";
    all_pass = all_pass && r.pass;
    ordered_json j;
    j["id"] = r.id;
    j["name"] = r.name;
    j["pass"] = r.pass;
    j["detail"] = r.detail;
    arr.push_back(j);
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    ordered_json j;
    j["suite"] = suite;
    j["version"] = kVersion;
    j["all_pass"] = all_pass;
    j["results"] = arr;
    write_text_file((std::filesystem::path(out_dir) / ("verify_" + suite + ".json")).string(),
                    j.dump(2) + "\n");
  }
  std::cout << (all_pass ? "all checks passed" : "CHECK FAILURES PRESENT") << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace drumlab
