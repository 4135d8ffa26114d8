#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "drumlab/eigensolver.hpp"
#include "drumlab/grid.hpp"
#include "drumlab/shape.hpp"

namespace drumlab {

// Grid box = exact bounding box of the domain. Straight boundary pieces that
// hit the box then fall on cell boundaries at every spacing, which keeps the
// discretization error cleanly first-order for Richardson extrapolation.
inline GridSpec auto_grid(const Shape& domain, double h) {
  const BBox bb = domain.bbox();
  return GridSpec(bb.lo, bb.hi, h);
}

inline SpectralResult solve_shape(const Shape& domain,
                                  const std::optional<Translate>& obstacle,
                                  const GridSpec& grid, double tol, int max_iter = 500) {
  auto mask = std::make_shared<const DomainMask>(rasterize(domain, obstacle, grid));
  return solve_mask(std::move(mask), tol, max_iter);
}

inline SpectralResult solve_shape(const Shape& domain,
                                  const std::optional<Translate>& obstacle, double h,
                                  double tol, int max_iter = 500) {
  return solve_shape(domain, obstacle, auto_grid(domain, h), tol, max_iter);
}

// Two-level solve on the same box at h and h/2 with a Richardson step.
struct LevelPair {
  SpectralResult coarse;  // spacing h
  SpectralResult fine;    // spacing h/2
  double lambda_extrap = 0.0;
};

inline LevelPair solve_extrapolated(const Shape& domain,
                                    const std::optional<Translate>& obstacle, double h,
                                    double tol, int max_iter = 500) {
  const BBox bb = domain.bbox();
  LevelPair out;
  out.coarse = solve_shape(domain, obstacle, GridSpec(bb.lo, bb.hi, h), tol, max_iter);
  out.fine = solve_shape(domain, obstacle, GridSpec(bb.lo, bb.hi, h / 2.0), tol, max_iter);
  out.lambda_extrap = refine_extrapolate(out.coarse.lambda1, out.fine.lambda1).lambda_extrap;
  return out;
}

}  // namespace drumlab
