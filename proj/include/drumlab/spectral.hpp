#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "drumlab/constants.hpp"
#include "drumlab/eigensolver.hpp"
#include "drumlab/grid.hpp"
#include "drumlab/shape.hpp"
#include "drumlab/vec2.hpp"

namespace drumlab {

// Cells within rel_tol of the ground-state sup, in raster order.
struct MaxSet {
  std::vector<Vec2> points;
  double rel_tol = 1e-3;
  double cluster_diameter = 0.0;

  const Vec2& first() const { return points.front(); }
};

inline MaxSet max_set(const SpectralResult& result, double rel_tol = 1e-3) {
  if (!(rel_tol > 0.0 && rel_tol <= 0.1))
    throw std::invalid_argument("max_set rel_tol must lie in (0, 0.1]");
  if (!result.mask) throw std::invalid_argument("result carries no mask");
  MaxSet m;
  m.rel_tol = rel_tol;
  const double cut = 1.0 - rel_tol;  // phi is sup-normalized
  for (std::size_t k = 0; k < result.phi.size(); ++k)
    if (result.phi[k] >= cut) m.points.push_back(result.mask->point_of(k));
  if (m.points.empty()) throw std::runtime_error("max set empty");
  double d2 = 0.0;
  for (std::size_t a = 0; a < m.points.size(); ++a)
    for (std::size_t b = a + 1; b < m.points.size(); ++b)
      d2 = std::max(d2, norm2(m.points[a] - m.points[b]));
  m.cluster_diameter = std::sqrt(d2);
  return m;
}

// rho_x: the max distance from a max point to the translated obstacle.
inline double rho(const Translate& t, const MaxSet& m) {
  if (m.points.empty()) throw std::invalid_argument("max set empty");
  double r = 0.0;
  for (const Vec2& y : m.points) r = std::max(r, distance_to_translate(y, t));
  return r;
}

// beta(rho): beta0 on the far branch, c0/(rho^2 lambda1) on the near branch;
// continuous at rho sqrt(lambda1) = r0 because beta0 = c0/r0^2.
inline double beta(double rho_x, double lambda1_omega, const ConstantsProfile& consts) {
  consts.validate();
  if (!(rho_x > 0.0))
    throw std::invalid_argument("rho_x must be positive for the bound");
  if (!(lambda1_omega > 0.0)) throw std::invalid_argument("lambda1 must be positive");
  if (rho_x * std::sqrt(lambda1_omega) > consts.r0) return consts.beta0;
  return consts.c0 / (rho_x * rho_x * lambda1_omega);
}

struct BoundReport {
  double lambda1_domain = 0.0;
  double lambda1_complement = 0.0;
  double rho_x = 0.0;
  double rho0 = 0.0;
  double beta_value = 0.0;
  double ball_bound = 0.0;  // c0 / rho0^2
  bool mechanism_applicable = false;
  bool mechanism_pass = false;
  bool stated_bound_pass = false;
  double slack_mechanism = 0.0;  // ball_bound - lambda1_complement
  double slack_stated = 0.0;     // beta*lambda1_domain - lambda1_complement
};

namespace detail {

// Every grid cell whose center lies in the ball is active. A ball reaching
// outside the grid box cannot be inside the mask.
inline bool ball_inside_mask(const DomainMask& mask, const Vec2& c, double r) {
  const GridSpec& g = mask.spec();
  if (c.x - r < g.box_lo.x || c.x + r > g.box_hi.x || c.y - r < g.box_lo.y ||
      c.y + r > g.box_hi.y)
    return false;
  const int i0 = static_cast<int>(std::floor((c.x - r - g.box_lo.x) / g.h));
  const int i1 = static_cast<int>(std::floor((c.x + r - g.box_lo.x) / g.h));
  const int j0 = static_cast<int>(std::floor((c.y - r - g.box_lo.y) / g.h));
  const int j1 = static_cast<int>(std::floor((c.y + r - g.box_lo.y) / g.h));
  const double r2 = r * r;
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      if (norm2(g.cell_center(i, j) - c) > r2) continue;
      if (!mask.is_active_cell(i, j)) return false;
    }
  }
  return true;
}

}  // namespace detail

// Verifies the two inequalities behind the main bound: the inscribed-ball
// mechanism lambda1(complement) <= c0/rho0^2 (when some max point carries a
// fully rasterized ball of radius rho0 in the complement) and the stated bound
// lambda1(complement) <= beta(rho_x) * lambda1(domain). Slacks are signed
// bound-minus-value; tolerance policy is the caller's.
inline BoundReport check_main_bound(const SpectralResult& domain_result,
                                    const SpectralResult& complement_result,
                                    const Translate& t, const ConstantsProfile& consts,
                                    double rel_tol = 1e-3) {
  consts.validate();
  if (!domain_result.mask || !complement_result.mask)
    throw std::invalid_argument("results carry no mask");
  const MaxSet M = max_set(domain_result, rel_tol);
  BoundReport rep;
  rep.lambda1_domain = domain_result.lambda1;
  rep.lambda1_complement = complement_result.lambda1;
  rep.rho_x = rho(t, M);
  if (!(rep.rho_x > 0.0))
    throw std::invalid_argument("rho_x must be positive for the bound");
  rep.rho0 = std::min(consts.r0 / std::sqrt(domain_result.lambda1), rep.rho_x);
  rep.ball_bound = consts.c0 / (rep.rho0 * rep.rho0);
  rep.beta_value = beta(rep.rho_x, domain_result.lambda1, consts);

  rep.mechanism_applicable = false;
  for (const Vec2& x0 : M.points) {
    if (detail::ball_inside_mask(*complement_result.mask, x0, rep.rho0)) {
      rep.mechanism_applicable = true;
      break;
    }
  }
  rep.slack_mechanism = rep.ball_bound - rep.lambda1_complement;
  rep.mechanism_pass = !rep.mechanism_applicable || rep.slack_mechanism >= 0.0;
  rep.slack_stated = rep.beta_value * rep.lambda1_domain - rep.lambda1_complement;
  rep.stated_bound_pass = rep.slack_stated >= 0.0;
  return rep;
}

// Cell-counted fraction of the ball B_r(first max point) covered by the mask.
// The discrete max point can sit half a cell off the continuous one, so a
// protrusion of up to one spacing is clipped; anything larger is an error.
inline double inscribed_fraction(const SpectralResult& result, const DomainMask& mask,
                                 double r, double rel_tol = 1e-3) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  const Vec2 c = max_set(result, rel_tol).first();
  const GridSpec& g = mask.spec();
  if (c.x - r < g.box_lo.x - g.h || c.x + r > g.box_hi.x + g.h ||
      c.y - r < g.box_lo.y - g.h || c.y + r > g.box_hi.y + g.h)
    throw std::invalid_argument("ball extends outside the grid box");
  const int i0 = static_cast<int>(std::floor((c.x - r - g.box_lo.x) / g.h));
  const int i1 = static_cast<int>(std::floor((c.x + r - g.box_lo.x) / g.h));
  const int j0 = static_cast<int>(std::floor((c.y - r - g.box_lo.y) / g.h));
  const int j1 = static_cast<int>(std::floor((c.y + r - g.box_lo.y) / g.h));
  const double r2 = r * r;
  std::int64_t in_ball = 0, in_mask = 0;
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      if (i < 0 || j < 0 || i >= g.nx() || j >= g.ny()) continue;
      if (norm2(g.cell_center(i, j) - c) > r2) continue;
      ++in_ball;
      if (mask.is_active_cell(i, j)) ++in_mask;
    }
  }
  if (in_ball == 0) throw std::runtime_error("ball smaller than one cell");
  return static_cast<double>(in_mask) / static_cast<double>(in_ball);
}

// lambda1 * area / (pi * j01^2); >= 1 iff the planar Faber-Krahn inequality
// holds, with equality for the disc.
inline double faber_krahn_margin(double lambda1, double area) {
  if (!(area > 0.0)) throw std::invalid_argument("area must be positive");
  return lambda1 * area / (constants::pi * constants::j01_sq);
}

// Scaled wall gradient: sup of the one-sided slope phi/h across boundary
// faces, divided by sqrt(lambda1). The exclusion stencil zeroes the field at
// the missing neighbor's center, so phi/h is the first-order normal slope at
// a face. The quantity of interest is the boundary normal derivative; the
// interior gradient can exceed it (on a disc |grad phi| peaks near r = 0.77,
// above its value at the wall). Faces next to staircase jogs misstate the
// wall distance by up to a factor of two, so only the central face of each
// maximal straight run of at least three boundary faces enters the sup; a
// mask too small to have such a run falls back to every boundary face.
inline double gradient_ratio(const SpectralResult& result) {
  if (!result.mask) throw std::invalid_argument("result carries no mask");
  if (result.disconnected)
    throw std::invalid_argument("gradient_ratio requires a connected mask");
  const DomainMask& mask = *result.mask;
  const double h = mask.spec().h;
  double best_run = -1.0;
  double best_any = 0.0;
  const int di[4] = {1, -1, 0, 0};
  const int dj[4] = {0, 0, 1, -1};
  for (std::size_t k = 0; k < result.phi.size(); ++k) {
    const auto [i, j] = mask.cell_of(k);
    for (int d = 0; d < 4; ++d) {
      if (mask.index_of(i + di[d], j + dj[d]) >= 0) continue;
      best_any = std::max(best_any, result.phi[k] / h);
      const int ti = dj[d];
      const int tj = di[d];
      const auto face_at = [&](int t) {
        return mask.index_of(i + t * ti, j + t * tj) >= 0 &&
               mask.index_of(i + t * ti + di[d], j + t * tj + dj[d]) < 0;
      };
      if (face_at(-1)) continue;  // walk each run once, from its start
      int len = 1;
      while (face_at(len)) ++len;
      if (len < 3) continue;
      for (int m = (len - 1) / 2; m <= len / 2; ++m) {
        const std::int32_t kk = mask.index_of(i + m * ti, j + m * tj);
        best_run = std::max(
            best_run, result.phi[static_cast<std::size_t>(kk)] / h);
      }
    }
  }
  const double best = best_run >= 0.0 ? best_run : best_any;
  return best / std::sqrt(result.lambda1);
}

struct GroundStateCheck {
  double phi_value = 0.0;
  double rho_used = 0.0;
  double lower_bound = 0.0;  // 1 - gradient_ratio * sqrt(lambda1) * rho
  bool pass = false;
};

// Lipschitz chain from the max point: phi(x) >= 1 - sup|grad phi| * dist(x, M).
// Pass rho <= 0 to use the distance from x to the nearest max point.
inline GroundStateCheck ground_state_lower_check(const SpectralResult& result,
                                                 const Vec2& x, double rho_override = 0.0,
                                                 double rel_tol = 1e-3) {
  if (!result.mask) throw std::invalid_argument("result carries no mask");
  const DomainMask& mask = *result.mask;
  const GridSpec& g = mask.spec();
  const int i = static_cast<int>(std::floor((x.x - g.box_lo.x) / g.h));
  const int j = static_cast<int>(std::floor((x.y - g.box_lo.y) / g.h));
  const std::int32_t idx = mask.index_of(i, j);
  if (idx < 0) throw std::invalid_argument("point lies outside the mask");
  GroundStateCheck out;
  out.phi_value = result.phi[static_cast<std::size_t>(idx)];
  if (rho_override > 0.0) {
    out.rho_used = rho_override;
  } else {
    const MaxSet M = max_set(result, rel_tol);
    double d2 = std::numeric_limits<double>::max();
    for (const Vec2& y : M.points) d2 = std::min(d2, norm2(y - x));
    out.rho_used = std::sqrt(d2);
  }
  const double ratio = gradient_ratio(result);
  out.lower_bound = 1.0 - ratio * std::sqrt(result.lambda1) * out.rho_used;
  out.pass = out.phi_value >= out.lower_bound;
  return out;
}

}  // namespace drumlab
