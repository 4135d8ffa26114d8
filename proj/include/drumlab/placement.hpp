#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "drumlab/constants.hpp"
#include "drumlab/grid.hpp"
#include "drumlab/heart.hpp"
#include "drumlab/parallel.hpp"
#include "drumlab/shape.hpp"
#include "drumlab/solve.hpp"
#include "drumlab/spectral.hpp"

namespace drumlab {

// Relative tolerance for collecting argmax/argmin ties. Symmetric domains have
// genuinely non-unique maximizers; everything within this band is reported.
inline constexpr double kPlacementTieRel = 1e-6;

struct PlacementEntry {
  Vec2 offset{0, 0};
  double lambda1 = std::numeric_limits<double>::quiet_NaN();
  bool admissible = false;
  bool connected = false;
  bool contained = false;  // x + D inside the domain (geometric test)
};

struct PlacementLandscape {
  Shape domain;
  Shape obstacle;
  double lattice_step = 0.0;
  GridSpec grid;
  double tol = 0.0;
  double lambda1_domain = 0.0;  // cached no-obstacle solve on the same grid

  // lattice offsets are integer multiples of lattice_step
  long kx_min = 0, kx_max = -1;
  long ky_min = 0, ky_max = -1;
  std::vector<PlacementEntry> entries;  // lexicographic in (x, y)

  double mu = std::numeric_limits<double>::quiet_NaN();
  std::vector<Vec2> argmax;  // admissible offsets within tie tolerance of mu
  double lambda_min_contained = std::numeric_limits<double>::quiet_NaN();
  std::vector<Vec2> argmin;  // contained offsets within tie tolerance of the min

  long nx_off() const { return kx_max - kx_min + 1; }
  long ny_off() const { return ky_max - ky_min + 1; }
  const PlacementEntry& at(long ix, long iy) const {
    return entries[static_cast<std::size_t>(ix) * static_cast<std::size_t>(ny_off()) +
                   static_cast<std::size_t>(iy)];
  }
  bool on_lattice_boundary(const Vec2& offset) const {
    const long ix = std::lround(offset.x / lattice_step) - kx_min;
    const long iy = std::lround(offset.y / lattice_step) - ky_min;
    return ix == 0 || iy == 0 || ix == nx_off() - 1 || iy == ny_off() - 1;
  }
};

namespace detail {

inline bool obstacle_contained(const Shape& domain, const Shape& obstacle,
                               const Vec2& offset) {
  if (obstacle.is_disc()) {
    const Vec2 c = obstacle.disc_center() + offset;
    return domain.contains(c) && domain.interior_clearance(c) >= obstacle.disc_radius();
  }
  for (const Vec2& v : obstacle.vertices())
    if (!domain.contains(v + offset)) return false;
  return domain.is_convex();  // vertex test is conclusive only for convex domains
}

}  // namespace detail

// One eigensolve per lattice offset whose complement mask is nonempty.
// Offsets leaving the domain untouched reuse the cached no-obstacle solve
// (identical mask, identical deterministic result). Entries are written into
// preallocated slots, so the landscape does not depend on the job count.
inline PlacementLandscape sweep(const Shape& domain, const Shape& obstacle,
                                double lattice_step, const GridSpec& grid, double tol,
                                int jobs = 1,
                                const std::function<void(std::size_t, std::size_t)>&
                                    progress = {}) {
  if (!(lattice_step > 0.0)) throw std::invalid_argument("lattice_step must be positive");
  if (lattice_step < grid.h - 1e-12)
    throw std::invalid_argument("lattice_step must be at least the grid spacing");

  PlacementLandscape L;
  L.domain = domain;
  L.obstacle = obstacle;
  L.lattice_step = lattice_step;
  L.grid = grid;
  L.tol = tol;

  const SpectralResult domain_result = solve_shape(domain, std::nullopt, grid, tol);
  L.lambda1_domain = domain_result.lambda1;
  const std::size_t domain_count = domain_result.mask->n_active();
  const bool domain_connected = !domain_result.disconnected;

  const BBox db = domain.bbox();
  const BBox ob = obstacle.bbox();
  L.kx_min = std::lround(std::ceil((db.lo.x - ob.hi.x) / lattice_step - 1e-9));
  L.kx_max = std::lround(std::floor((db.hi.x - ob.lo.x) / lattice_step + 1e-9));
  L.ky_min = std::lround(std::ceil((db.lo.y - ob.hi.y) / lattice_step - 1e-9));
  L.ky_max = std::lround(std::floor((db.hi.y - ob.lo.y) / lattice_step + 1e-9));
  if (L.kx_min > L.kx_max || L.ky_min > L.ky_max)
    throw std::runtime_error("no lattice offsets meet the domain");

  const std::size_t total =
      static_cast<std::size_t>(L.nx_off()) * static_cast<std::size_t>(L.ny_off());
  L.entries.resize(total);

  std::mutex progress_mutex;
  std::size_t done = 0;
  parallel_for_indexed(total, jobs, [&](std::size_t idx) {
    const long ix = static_cast<long>(idx) / L.ny_off();
    const long iy = static_cast<long>(idx) % L.ny_off();
    PlacementEntry e;
    e.offset = {static_cast<double>(L.kx_min + ix) * lattice_step,
                static_cast<double>(L.ky_min + iy) * lattice_step};
    e.contained = detail::obstacle_contained(domain, obstacle, e.offset);
    const Translate t{obstacle, e.offset};
    DomainMask mask = detail::rasterize_unchecked(domain, t, grid);
    if (mask.n_active() == 0) {
      e.admissible = false;
    } else if (mask.n_active() == domain_count) {
      e.admissible = true;
      e.connected = domain_connected;
      e.lambda1 = domain_result.lambda1;
    } else {
      SpectralResult r =
          solve_mask(std::make_shared<const DomainMask>(std::move(mask)), tol);
      e.admissible = true;
      e.connected = !r.disconnected;
      e.lambda1 = r.lambda1;
    }
    L.entries[idx] = e;
    if (progress) {
      std::lock_guard<std::mutex> lock(progress_mutex);
      progress(++done, total);
    }
  });

  double mu = -std::numeric_limits<double>::max();
  double min_c = std::numeric_limits<double>::max();
  bool any_admissible = false, any_contained = false;
  for (const PlacementEntry& e : L.entries) {
    if (!e.admissible) continue;
    any_admissible = true;
    mu = std::max(mu, e.lambda1);
    if (e.contained) {
      any_contained = true;
      min_c = std::min(min_c, e.lambda1);
    }
  }
  if (!any_admissible) throw std::runtime_error("all lattice offsets are inadmissible");
  L.mu = mu;
  for (const PlacementEntry& e : L.entries)
    if (e.admissible && e.lambda1 >= mu * (1.0 - kPlacementTieRel))
      L.argmax.push_back(e.offset);
  if (any_contained) {
    L.lambda_min_contained = min_c;
    for (const PlacementEntry& e : L.entries)
      if (e.admissible && e.contained && e.lambda1 <= min_c * (1.0 + kPlacementTieRel))
        L.argmin.push_back(e.offset);
  }
  return L;
}

// Landscape CSV: one row per lattice point, lexicographic in (x, y).
inline std::string landscape_to_csv(const PlacementLandscape& L) {
  std::ostringstream os;
  os << "x_offset,y_offset,lambda1,admissible,connected\n";
  char buf[160];
  for (const PlacementEntry& e : L.entries) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%d,%d\n", e.offset.x, e.offset.y,
                  e.lambda1, e.admissible ? 1 : 0, e.connected ? 1 : 0);
    os << buf;
  }
  return os.str();
}

struct RefinedMax {
  Vec2 offset{0, 0};
  double lambda1 = 0.0;
};

// Pattern search around the coarse argmax. Ties resolve to the
// lexicographically smallest offset; each round shrinks the step and re-solves
// a sub-lattice wide enough to cover the previous cell.
inline RefinedMax refine_maximizer(const PlacementLandscape& L, double shrink, int levels,
                                   int jobs = 1) {
  if (!(shrink > 0.0 && shrink < 1.0))
    throw std::invalid_argument("shrink must lie in (0, 1)");
  if (levels < 0) throw std::invalid_argument("levels must be >= 0");
  if (L.argmax.empty()) throw std::runtime_error("landscape has no argmax");

  Vec2 best = L.argmax.front();
  for (const Vec2& v : L.argmax)
    if (v.x < best.x - 1e-15 || (std::abs(v.x - best.x) <= 1e-15 && v.y < best.y)) best = v;
  if (L.on_lattice_boundary(best))
    throw std::runtime_error("expand lattice: argmax on lattice boundary");

  double best_lambda = -std::numeric_limits<double>::max();
  for (const PlacementEntry& e : L.entries)
    if (e.admissible && std::abs(e.offset.x - best.x) < 1e-12 &&
        std::abs(e.offset.y - best.y) < 1e-12)
      best_lambda = e.lambda1;

  double step = L.lattice_step;
  for (int level = 0; level < levels; ++level) {
    const double prev_step = step;
    step *= shrink;
    const long span = std::lround(std::ceil(prev_step / step - 1e-9));
    const long width = 2 * span + 1;
    const std::size_t total = static_cast<std::size_t>(width) * width;
    std::vector<double> lam(total, std::numeric_limits<double>::quiet_NaN());
    const Vec2 center = best;
    parallel_for_indexed(total, jobs, [&](std::size_t idx) {
      const long mx = static_cast<long>(idx) / width - span;
      const long my = static_cast<long>(idx) % width - span;
      const Vec2 off{center.x + static_cast<double>(mx) * step,
                     center.y + static_cast<double>(my) * step};
      const Translate t{L.obstacle, off};
      DomainMask mask = detail::rasterize_unchecked(L.domain, t, L.grid);
      if (mask.n_active() == 0) return;
      SpectralResult r =
          solve_mask(std::make_shared<const DomainMask>(std::move(mask)), L.tol);
      lam[idx] = r.lambda1;
    });
    // ascending scan is lexicographic in the offset, so exact ties keep the
    // smallest offset and the refined value never drops below the coarse max
    for (std::size_t idx = 0; idx < total; ++idx) {
      if (std::isnan(lam[idx])) continue;
      if (lam[idx] <= best_lambda) continue;
      const long mx = static_cast<long>(idx) / width - span;
      const long my = static_cast<long>(idx) % width - span;
      best_lambda = lam[idx];
      best = {center.x + static_cast<double>(mx) * step,
              center.y + static_cast<double>(my) * step};
    }
  }
  return {best, best_lambda};
}

inline bool symmetric_about(const Shape& shape, const Hyperplane2D& H, double tol) {
  if (shape.is_disc()) return std::abs(H.signed_distance(shape.disc_center())) <= tol;
  for (const Vec2& v : shape.vertices()) {
    const Vec2 rv = H.reflect(v);
    double d = std::numeric_limits<double>::max();
    for (const Vec2& w : shape.vertices()) d = std::min(d, distance(rv, w));
    if (d > tol) return false;
  }
  return true;
}

struct HkkReport {
  double max_dist_to_plane = 0.0;  // worst argmax disc-center distance to H
  bool max_on_plane = false;
  bool min_applicable = false;     // some placement is fully interior
  double max_boundary_gap = 0.0;   // worst argmin disc-to-boundary distance
  bool min_touches_boundary = false;
  double tol = 0.0;                // lattice_step
  bool pass = false;
};

// Symmetric-domain check: maximizing discs sit on the symmetry hyperplane,
// minimizing interior discs touch the boundary, both to lattice resolution.
inline HkkReport hkk_check(const PlacementLandscape& L, const Hyperplane2D& H) {
  if (!L.obstacle.is_disc()) throw std::invalid_argument("hkk_check needs a disc obstacle");
  if (!L.domain.is_convex()) throw std::invalid_argument("hkk_check needs a convex domain");
  if (!symmetric_about(L.domain, H, L.grid.h))
    throw std::invalid_argument("domain is not symmetric about the hyperplane");
  HkkReport rep;
  rep.tol = L.lattice_step;
  for (const Vec2& off : L.argmax) {
    const Vec2 c = L.obstacle.disc_center() + off;
    rep.max_dist_to_plane =
        std::max(rep.max_dist_to_plane, std::abs(H.signed_distance(c)));
  }
  rep.max_on_plane = !L.argmax.empty() && rep.max_dist_to_plane <= rep.tol + 1e-12;
  rep.min_applicable = !L.argmin.empty();
  if (rep.min_applicable) {
    for (const Vec2& off : L.argmin) {
      const Vec2 c = L.obstacle.disc_center() + off;
      const double gap = L.domain.interior_clearance(c) - L.obstacle.disc_radius();
      rep.max_boundary_gap = std::max(rep.max_boundary_gap, gap);
    }
    rep.min_touches_boundary = rep.max_boundary_gap <= rep.tol + 1e-12;
  }
  rep.pass = rep.max_on_plane && (!rep.min_applicable || rep.min_touches_boundary);
  return rep;
}

struct LocalizationReport {
  double c_ratio = 0.0;       // mu / lambda1(domain)
  bool hypothesis_met = false;  // c_ratio > c0/r0^2
  double radius_bound = 0.0;  // sqrt(c0 / (c_ratio * lambda1))
  double worst_rho = 0.0;     // max over argmax offsets of rho_x
  double slack = 0.0;         // radius_bound - worst_rho
  bool pass = false;          // vacuously true when the hypothesis fails
};

// Maximizer localization: when mu exceeds (c0/r0^2) * lambda1, every argmax
// obstacle must sit within beta^{-1}(mu/lambda1) of the whole max set.
inline LocalizationReport localization_check(const PlacementLandscape& L, const MaxSet& M,
                                             const ConstantsProfile& consts) {
  consts.validate();
  LocalizationReport rep;
  rep.c_ratio = L.mu / L.lambda1_domain;
  rep.hypothesis_met = rep.c_ratio > consts.c0 / (consts.r0 * consts.r0);
  if (!rep.hypothesis_met) {
    rep.pass = true;
    return rep;
  }
  rep.radius_bound = std::sqrt(consts.c0 / (rep.c_ratio * L.lambda1_domain));
  for (const Vec2& off : L.argmax)
    rep.worst_rho = std::max(rep.worst_rho, rho(Translate{L.obstacle, off}, M));
  rep.slack = rep.radius_bound - rep.worst_rho;
  rep.pass = rep.slack >= 0.0;
  return rep;
}

struct ContainmentReport {
  double mu_ratio = 0.0;  // mu / lambda1(domain)
  bool comparable_branch = false;
  double worst_rho = 0.0;
  double tol = 0.0;  // one grid cell
  bool pass = false;
};

// Convex-obstacle dichotomy: above the calibrated threshold the maximizer
// must cover the max set (rho = 0 up to a cell); below it, the landscape
// maximum stays comparable to lambda1(domain).
inline ContainmentReport convex_containment_check(const PlacementLandscape& L,
                                                  const MaxSet& M,
                                                  const ConstantsProfile& consts) {
  consts.validate();
  if (!L.obstacle.is_convex())
    throw std::invalid_argument("convex_containment_check needs a convex obstacle");
  ContainmentReport rep;
  rep.mu_ratio = L.mu / L.lambda1_domain;
  rep.tol = L.grid.h;
  if (rep.mu_ratio < consts.C0) {
    rep.comparable_branch = true;
    rep.pass = true;
    return rep;
  }
  for (const Vec2& off : L.argmax)
    rep.worst_rho = std::max(rep.worst_rho, rho(Translate{L.obstacle, off}, M));
  rep.pass = rep.worst_rho <= rep.tol + 1e-12;
  return rep;
}

struct HeartMembershipReport {
  double worst_distance = 0.0;
  double tol = 0.0;
  bool pass = false;
};

// Every max point lies in the heart, up to grid plus heart tolerance.
inline HeartMembershipReport heart_membership_check(const MaxSet& M,
                                                    const HeartResult& heart_poly,
                                                    double tol) {
  HeartMembershipReport rep;
  rep.tol = tol;
  for (const Vec2& p : M.points)
    rep.worst_distance = std::max(rep.worst_distance, heart_poly.distance_to(p));
  rep.pass = rep.worst_distance <= tol;
  return rep;
}

}  // namespace drumlab
