#pragma once

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "drumlab/asymmetry.hpp"
#include "drumlab/calibrate.hpp"
#include "drumlab/constants.hpp"
#include "drumlab/dense_oracle.hpp"
#include "drumlab/eigensolver.hpp"
#include "drumlab/heart.hpp"
#include "drumlab/placement.hpp"
#include "drumlab/solve.hpp"
#include "drumlab/spectral.hpp"

namespace drumlab {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline std::string vfmt(const char* fmt, ...) {
  char buf[768];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

inline double urand(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

}  // namespace detail

namespace testshapes {

inline Shape square() { return Shape::rectangle(0, 0, 1, 1); }
inline Shape unit_disc() { return Shape::disc({0, 0}, 1.0); }
inline Shape rect(double a, double b) { return Shape::rectangle(0, 0, a, b); }
inline Shape scalene() { return Shape::convex_polygon({{0, 0}, {4, 0}, {1, 2}}); }
inline Shape equilateral() {
  return Shape::convex_polygon({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}});
}
inline Shape right_triangle() { return Shape::convex_polygon({{0, 0}, {1, 0}, {0, 1}}); }
inline Shape lshape() {
  return Shape::polygon({{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {0, 1}});
}

}  // namespace testshapes

struct TimedPair {
  LevelPair lp;
  double t_coarse_s = 0.0;
  double t_fine_s = 0.0;
};

struct TimedLandscape {
  PlacementLandscape L;
  double elapsed_s = 0.0;
};

// Memoizes the expensive solves so overlapping checks share them. Keys are
// internal names; each key is always requested with the same parameters.
class VerifyContext {
 public:
  explicit VerifyContext(int jobs) : jobs_(jobs) {}

  int jobs() const { return jobs_; }
  const ConstantsProfile& consts() const { return consts_; }

  const TimedPair& pair(const std::string& key, const Shape& shape, double h, double tol) {
    auto it = pairs_.find(key);
    if (it != pairs_.end()) return it->second;
    TimedPair tp;
    const BBox bb = shape.bbox();
    const GridSpec coarse(bb.lo, bb.hi, h);
    const GridSpec fine(bb.lo, bb.hi, h / 2);
    detail::Stopwatch w1;
    tp.lp.coarse = solve_shape(shape, std::nullopt, coarse, tol);
    tp.t_coarse_s = w1.s();
    detail::Stopwatch w2;
    tp.lp.fine = solve_shape(shape, std::nullopt, fine, tol);
    tp.t_fine_s = w2.s();
    tp.lp.lambda_extrap =
        refine_extrapolate(tp.lp.coarse.lambda1, tp.lp.fine.lambda1).lambda_extrap;
    return pairs_.emplace(key, std::move(tp)).first->second;
  }

  const SpectralResult& single(const std::string& key, const Shape& shape, double h,
                               double tol) {
    auto it = singles_.find(key);
    if (it != singles_.end()) return it->second;
    SpectralResult r = solve_shape(shape, std::nullopt, auto_grid(shape, h), tol);
    return singles_.emplace(key, std::move(r)).first->second;
  }

  const TimedLandscape& landscape(const std::string& key, const Shape& domain,
                                  const Shape& obstacle, double step, double h, double tol) {
    auto it = lands_.find(key);
    if (it != lands_.end()) return it->second;
    TimedLandscape tl;
    detail::Stopwatch w;
    tl.L = sweep(domain, obstacle, step, auto_grid(domain, h), tol, jobs_);
    tl.elapsed_s = w.s();
    return lands_.emplace(key, std::move(tl)).first->second;
  }

 private:
  int jobs_;
  ConstantsProfile consts_ = ConstantsProfile::analytic_2d();
  std::map<std::string, TimedPair> pairs_;
  std::map<std::string, SpectralResult> singles_;
  std::map<std::string, TimedLandscape> lands_;
};

// 1. Closed-form eigenvalues at h = 1/128 with Richardson extrapolation.
inline CheckResult criterion_analytic_oracles(VerifyContext& ctx) {
  struct Case {
    const char* name;
    Shape shape;
    double target;
    double frac;
  };
  const double pi2 = constants::pi * constants::pi;
  const std::vector<Case> cases = {
      {"square", testshapes::square(), 2 * pi2, 0.005},
      {"disc", testshapes::unit_disc(), constants::j01_sq, 0.01},
      {"rect12", testshapes::rect(1, 2), pi2 * 1.25, 0.005},
  };
  bool pass = true;
  std::string detail;
  for (const Case& c : cases) {
    const TimedPair& tp = ctx.pair(std::string(c.name) + "/128", c.shape, 1.0 / 128, 1e-6);
    const double rel = std::abs(tp.lp.lambda_extrap - c.target) / c.target;
    const bool ok = rel <= c.frac && tp.t_coarse_s < 30.0 && tp.t_fine_s < 30.0;
    pass = pass && ok;
    detail += detail::vfmt("%s λ=%.6f target=%.6f rel=%.2e t=%.1fs+%.1fs%s; ", c.name,
                           tp.lp.lambda_extrap, c.target, rel, tp.t_coarse_s, tp.t_fine_s,
                           ok ? "" : " [FAIL]");
  }
  return {1, "analytic-oracles", pass, detail};
}

// 2. Iterative solver against the dense oracle on random masks.
inline CheckResult criterion_oracle_equivalence(VerifyContext&) {
  std::mt19937_64 rng(0x0ac1e5eedULL);
  detail::Stopwatch total;
  double worst = 0.0;
  const double h = 1.0 / 16;
  for (int k = 0; k < 30; ++k) {
    const int nx = 8 + static_cast<int>(rng() % 17);
    const int ny = 8 + static_cast<int>(rng() % 17);
    const double p = 0.55 + 0.35 * detail::urand(rng);
    std::vector<std::uint8_t> act(static_cast<std::size_t>(nx) * ny, 0);
    std::size_t n_on = 0;
    for (auto& a : act) {
      a = detail::urand(rng) < p ? 1 : 0;
      n_on += a;
    }
    if (n_on == 0) act[0] = 1;
    auto mask = std::make_shared<const DomainMask>(
        GridSpec({0, 0}, {nx * h, ny * h}, h), std::move(act));
    const StencilOperator op(*mask);
    const DenseSpectrum ds = dense_oracle(op);
    const SpectralResult it = solve_mask(mask, 1e-7, 2000);
    const double rel = std::abs(it.lambda1 - ds.eigenvalues[0]) / ds.eigenvalues[0];
    worst = std::max(worst, rel);
  }
  const double elapsed = total.s();
  const bool pass = worst <= 1e-8 && elapsed < 60.0;
  return {2, "oracle-equivalence", pass,
          detail::vfmt("30 masks, worst rel diff %.2e, %.1fs", worst, elapsed)};
}

// 3. Eigenvalue monotonicity under cell removal, exact and at solver scale.
inline CheckResult criterion_monotonicity(VerifyContext& ctx) {
  // (a) dense oracle, 12x12 mask, 50 random deactivation patterns
  const double h12 = 1.0 / 12;
  const GridSpec g12({0, 0}, {1, 1}, h12);
  std::vector<std::uint8_t> full(144, 1);
  const DomainMask base(g12, std::vector<std::uint8_t>(full));
  const StencilOperator base_op(base);
  const double lam_full = dense_oracle(base_op).eigenvalues[0];
  std::mt19937_64 rng(0x30303030ULL);
  double worst_margin = std::numeric_limits<double>::max();
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 40);
    std::vector<int> idx(144);
    std::iota(idx.begin(), idx.end(), 0);
    for (int t = 0; t < k; ++t) {
      const int j = t + static_cast<int>(rng() % (144 - t));
      std::swap(idx[t], idx[j]);
    }
    std::vector<std::uint8_t> act = full;
    for (int t = 0; t < k; ++t) act[idx[t]] = 0;
    const DomainMask sub(g12, std::move(act));
    const StencilOperator op(sub);
    const double lam_sub = dense_oracle(op).eigenvalues[0];
    worst_margin = std::min(worst_margin, lam_sub - lam_full);
  }
  const bool part_a = worst_margin >= -1e-10 * lam_full;

  // (b) disc removals from the unit square at h = 1/96
  const SpectralResult& dom =
      ctx.single("square/96", testshapes::square(), 1.0 / 96, 1e-6);
  std::mt19937_64 rng2(0x40404040ULL);
  double worst_ratio = std::numeric_limits<double>::max();
  for (int trial = 0; trial < 20; ++trial) {
    const double r = 0.05 + 0.15 * detail::urand(rng2);
    const Vec2 c{detail::urand(rng2), detail::urand(rng2)};
    const SpectralResult rc = solve_shape(
        testshapes::square(), Translate{Shape::disc({0, 0}, r), c}, dom.mask->spec(), 1e-6);
    worst_ratio = std::min(worst_ratio, rc.lambda1 / dom.lambda1);
  }
  const bool part_b = worst_ratio >= 0.98;
  return {3, "domain-monotonicity", part_a && part_b,
          detail::vfmt("dense worst slack %.3e%s; placement worst ratio %.6f%s",
                       worst_margin, part_a ? "" : " [FAIL]", worst_ratio,
                       part_b ? "" : " [FAIL]")};
}

// 4. Inscribed-ball bound over the disc r = 0.15 sweep.
inline CheckResult criterion_inscribed_ball(VerifyContext& ctx) {
  const TimedLandscape& tl = ctx.landscape("square_disc015", testshapes::square(),
                                           Shape::disc({0, 0}, 0.15), 0.05, 1.0 / 96, 1e-6);
  const SpectralResult& dom =
      ctx.single("square/96", testshapes::square(), 1.0 / 96, 1e-6);
  const MaxSet M = max_set(dom);
  int applicable = 0;
  double worst_ratio = 0.0;
  for (const PlacementEntry& e : tl.L.entries) {
    if (!e.admissible) continue;
    const Translate t{tl.L.obstacle, e.offset};
    if (!(rho(t, M) > 0.0)) continue;
    SpectralResult synth;
    synth.lambda1 = e.lambda1;
    synth.mask = std::make_shared<const DomainMask>(
        detail::rasterize_unchecked(tl.L.domain, t, tl.L.grid));
    const BoundReport rep = check_main_bound(dom, synth, t, ctx.consts());
    if (!rep.mechanism_applicable) continue;
    ++applicable;
    worst_ratio = std::max(worst_ratio, e.lambda1 / rep.ball_bound);
  }
  const bool pass = applicable > 0 && worst_ratio <= 1.02 && tl.elapsed_s < 900.0;
  return {4, "inscribed-ball-bound", pass,
          detail::vfmt("%d placements with inscribed ball, worst λ/(c0/ρ0²)=%.4f (≤1.02), "
                       "sweep %.0fs",
                       applicable, worst_ratio, tl.elapsed_s)};
}

// 5. Maximizer centered, minimizer at the boundary (disc obstacle sweep).
inline CheckResult criterion_hkk(VerifyContext& ctx) {
  const TimedLandscape& tl = ctx.landscape("square_disc015", testshapes::square(),
                                           Shape::disc({0, 0}, 0.15), 0.05, 1.0 / 96, 1e-6);
  const HkkReport hx = hkk_check(tl.L, Hyperplane2D({1, 0}, 0.5));
  const HkkReport hy = hkk_check(tl.L, Hyperplane2D({0, 1}, 0.5));
  const bool pass = hx.pass && hy.pass;
  return {5, "hkk-placement", pass,
          detail::vfmt("argmax dist to axes %.3f/%.3f (tol %.3f), min boundary gap %.3f, "
                       "min applicable %s",
                       hx.max_dist_to_plane, hy.max_dist_to_plane, hx.tol,
                       hx.max_boundary_gap, hx.min_applicable ? "yes" : "no")};
}

// 6. Localization of the maximizer for a large disc obstacle.
inline CheckResult criterion_localization(VerifyContext& ctx) {
  const TimedLandscape& tl = ctx.landscape("square_disc045", testshapes::square(),
                                           Shape::disc({0, 0}, 0.45), 0.05, 1.0 / 96, 1e-6);
  const SpectralResult& dom =
      ctx.single("square/96", testshapes::square(), 1.0 / 96, 1e-6);
  const LocalizationReport rep = localization_check(tl.L, max_set(dom), ctx.consts());
  const bool pass = rep.hypothesis_met && rep.pass && rep.slack >= 0.0;
  return {6, "localization", pass,
          detail::vfmt("μ/λ1=%.2f (threshold %.2f), worst ρ=%.4f ≤ bound %.4f, slack %.4f",
                       rep.c_ratio, ctx.consts().c0 / (ctx.consts().r0 * ctx.consts().r0),
                       rep.worst_rho, rep.radius_bound, rep.slack)};
}

// 7. Large convex obstacle: argmax covers the max point set.
inline CheckResult criterion_containment(VerifyContext& ctx) {
  const TimedLandscape& tl =
      ctx.landscape("square_sq06", testshapes::square(),
                    Shape::rectangle(0, 0, 0.6, 0.6), 0.05, 1.0 / 96, 1e-6);
  const SpectralResult& dom =
      ctx.single("square/96", testshapes::square(), 1.0 / 96, 1e-6);
  const ContainmentReport rep = convex_containment_check(tl.L, max_set(dom), ctx.consts());
  const bool pass = !rep.comparable_branch && rep.pass;
  return {7, "convex-containment", pass,
          detail::vfmt("μ/λ1=%.2f (C0=%.2f), worst ρ=%.5f ≤ h=%.5f%s", rep.mu_ratio,
                       ctx.consts().C0, rep.worst_rho, 1.0 / 96,
                       rep.comparable_branch ? " [comparable branch]" : "")};
}

// 8. Max point lies in the heart; square heart degenerates to the center.
inline CheckResult criterion_heart_membership(VerifyContext& ctx) {
  struct Case {
    const char* name;
    Shape shape;
    double h;
    bool check_center;
  };
  const std::vector<Case> cases = {
      {"square", testshapes::square(), 1.0 / 32, true},
      {"disc", testshapes::unit_disc(), 1.0 / 32, false},
      {"rect12", testshapes::rect(1, 2), 1.0 / 32, false},
      {"scalene", testshapes::scalene(), 1.0 / 32, false},
  };
  const double heart_tol = 1e-5;
  bool pass = true;
  std::string detail;
  for (const Case& c : cases) {
    const SpectralResult& r =
        ctx.single(std::string(c.name) + "/32", c.shape, c.h, 1e-6);
    const MaxSet M = max_set(r);
    const HeartResult hr = heart(c.shape, 360, heart_tol);
    const HeartMembershipReport rep = heart_membership_check(M, hr, c.h + heart_tol);
    bool ok = rep.pass;
    if (c.check_center) {
      const Vec2 center{0.5, 0.5};
      double worst = norm(hr.point - center);
      for (const Vec2& v : hr.vertices) worst = std::max(worst, norm(v - center));
      ok = ok && worst <= 2 * heart_tol;
      detail += detail::vfmt("%s dist=%.4f (tol %.4f), center dev %.2e (≤%.0e)%s; ", c.name,
                             rep.worst_distance, rep.tol, worst, 2 * heart_tol,
                             ok ? "" : " [FAIL]");
    } else {
      detail += detail::vfmt("%s dist=%.4f (tol %.4f)%s; ", c.name, rep.worst_distance,
                             rep.tol, ok ? "" : " [FAIL]");
    }
    pass = pass && ok;
  }
  return {8, "heart-membership", pass, detail};
}

// 9. Faber-Krahn margins across a mixed shape family.
inline CheckResult criterion_faber_krahn(VerifyContext& ctx) {
  struct Case {
    const char* name;
    Shape shape;
    double h;
  };
  const std::vector<Case> cases = {
      {"square", testshapes::square(), 1.0 / 128},
      {"disc", testshapes::unit_disc(), 1.0 / 128},
      {"rect12", testshapes::rect(1, 2), 1.0 / 128},
      {"rect13", testshapes::rect(1, 3), 1.0 / 64},
      {"rect14", testshapes::rect(1, 4), 1.0 / 64},
      {"rect_x", testshapes::rect(0.7, 1.3), 1.0 / 64},
      {"equilateral", testshapes::equilateral(), 1.0 / 64},
      {"right_tri", testshapes::right_triangle(), 1.0 / 64},
      {"scalene", testshapes::scalene(), 1.0 / 64},
      {"lshape", testshapes::lshape(), 1.0 / 64},
  };
  bool pass = true;
  std::string detail;
  for (const Case& c : cases) {
    const std::string key =
        std::string(c.name) + "/" + std::to_string(static_cast<int>(0.5 + 1.0 / c.h));
    const TimedPair& tp = ctx.pair(key, c.shape, c.h, 1e-6);
    const double margin = faber_krahn_margin(tp.lp.lambda_extrap, c.shape.area());
    bool ok = margin >= 0.99;
    if (std::string(c.name) == "disc") ok = ok && margin <= 1.01;
    pass = pass && ok;
    detail += detail::vfmt("%s %.4f%s; ", c.name, margin, ok ? "" : " [FAIL]");
  }
  return {9, "faber-krahn-margins", pass, detail};
}

// 10. Max-set cluster stays within one stencil neighborhood.
inline CheckResult criterion_max_cluster(VerifyContext& ctx) {
  struct Case {
    const char* name;
    Shape shape;
    double h;
  };
  const std::vector<Case> cases = {
      {"square", testshapes::square(), 1.0 / 32},
      {"disc", testshapes::unit_disc(), 1.0 / 32},
      {"rect12", testshapes::rect(1, 2), 1.0 / 32},
      {"rect14", testshapes::rect(1, 4), 1.0 / 16},
      {"equilateral", testshapes::equilateral(), 1.0 / 32},
      {"scalene", testshapes::scalene(), 1.0 / 32},
  };
  bool pass = true;
  std::string detail;
  for (const Case& c : cases) {
    const std::string key =
        std::string(c.name) + "/" + std::to_string(static_cast<int>(0.5 + 1.0 / c.h));
    const SpectralResult& r = ctx.single(key, c.shape, c.h, 1e-6);
    const MaxSet M = max_set(r);
    const bool ok = M.cluster_diameter <= 2 * c.h + 1e-12;
    pass = pass && ok;
    detail += detail::vfmt("%s %.4f/%.4f%s; ", c.name, M.cluster_diameter, 2 * c.h,
                           ok ? "" : " [FAIL]");
  }
  return {10, "max-cluster-diameter", pass, detail};
}

// 11. Scaled boundary gradient against closed forms.
inline CheckResult criterion_gradient_ratio(VerifyContext& ctx) {
  const double target_square = 1.0 / std::sqrt(2.0);
  const double target_disc = 0.51914749728946674;  // |J0'(j01)| = J1(j01)
  const TimedPair& sq = ctx.pair("square/128", testshapes::square(), 1.0 / 128, 1e-6);
  const TimedPair& dc = ctx.pair("disc/128", testshapes::unit_disc(), 1.0 / 128, 1e-6);
  const double g_sq = gradient_ratio(sq.lp.fine);
  const double g_dc = gradient_ratio(dc.lp.fine);
  const bool ok_sq = std::abs(g_sq - target_square) <= 0.05 * target_square;
  const bool ok_dc = std::abs(g_dc - target_disc) <= 0.05 * target_disc;

  bool ok_family = true;
  std::string family_detail;
  const TimedPair& r12 = ctx.pair("rect12/128", testshapes::rect(1, 2), 1.0 / 128, 1e-6);
  const TimedPair& r13 = ctx.pair("rect13/64", testshapes::rect(1, 3), 1.0 / 64, 1e-6);
  const TimedPair& r14 = ctx.pair("rect14/64", testshapes::rect(1, 4), 1.0 / 64, 1e-6);
  const std::vector<std::pair<const char*, const SpectralResult*>> family = {
      {"1x1", &sq.lp.fine}, {"1x2", &r12.lp.fine}, {"1x3", &r13.lp.fine},
      {"1x4", &r14.lp.fine}};
  for (const auto& [name, res] : family) {
    const double g = gradient_ratio(*res);
    ok_family = ok_family && g <= 2.0;
    family_detail += detail::vfmt("%s %.4f ", name, g);
  }
  const bool pass = ok_sq && ok_dc && ok_family;
  return {11, "gradient-ratio", pass,
          detail::vfmt("square %.4f (target %.4f)%s; disc %.4f (target %.4f)%s; rects %s",
                       g_sq, target_square, ok_sq ? "" : " [FAIL]", g_dc, target_disc,
                       ok_dc ? "" : " [FAIL]", family_detail.c_str())};
}

// 12. Asymmetry estimator windows and determinism.
inline CheckResult criterion_asymmetry(VerifyContext&) {
  auto run = [](const Shape& s) {
    return estimate_asymmetry(s, 200, 20, 4000, 42);
  };
  const double a_sq = run(testshapes::square());
  const double a_dc = run(testshapes::unit_disc());
  const double a_l = run(testshapes::lshape());
  const bool deterministic = a_sq == run(testshapes::square()) &&
                             a_dc == run(testshapes::unit_disc()) &&
                             a_l == run(testshapes::lshape());
  const bool ok_sq = a_sq >= 0.48 && a_sq <= 0.60;
  const bool ok_dc = a_dc >= 0.48 && a_dc <= 0.60;
  const bool ok_l = a_l <= 0.30;
  const bool pass = deterministic && ok_sq && ok_dc && ok_l;
  return {12, "asymmetry-estimator", pass,
          detail::vfmt("square %.4f%s, disc %.4f%s, lshape %.4f%s, deterministic %s", a_sq,
                       ok_sq ? "" : " [FAIL]", a_dc, ok_dc ? "" : " [FAIL]", a_l,
                       ok_l ? "" : " [FAIL]", deterministic ? "yes" : "NO")};
}

inline CheckResult run_criterion(int id, VerifyContext& ctx) {
  switch (id) {
    case 1: return criterion_analytic_oracles(ctx);
    case 2: return criterion_oracle_equivalence(ctx);
    case 3: return criterion_monotonicity(ctx);
    case 4: return criterion_inscribed_ball(ctx);
    case 5: return criterion_hkk(ctx);
    case 6: return criterion_localization(ctx);
    case 7: return criterion_containment(ctx);
    case 8: return criterion_heart_membership(ctx);
    case 9: return criterion_faber_krahn(ctx);
    case 10: return criterion_max_cluster(ctx);
    case 11: return criterion_gradient_ratio(ctx);
    case 12: return criterion_asymmetry(ctx);
    default: throw std::invalid_argument("unknown criterion id");
  }
}

inline const std::vector<int>& suite_ids(const std::string& suite) {
  static const std::map<std::string, std::vector<int>> suites = {
      {"oracle", {1, 2, 12}},          {"monotonicity", {3}},
      {"bounds", {4, 6, 7, 11}},       {"hkk", {5}},
      {"heart", {8, 10}},              {"faber-krahn", {9}},
      {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}},
  };
  const auto it = suites.find(suite);
  if (it == suites.end())
    throw std::invalid_argument(
        "unknown suite '" + suite +
        "' (expected oracle, monotonicity, bounds, hkk, heart, faber-krahn, all)");
  return it->second;
}

inline std::vector<CheckResult> run_suite(const std::string& suite, VerifyContext& ctx) {
  std::vector<CheckResult> out;
  for (int id : suite_ids(suite)) out.push_back(run_criterion(id, ctx));
  return out;
}

}  // namespace drumlab
