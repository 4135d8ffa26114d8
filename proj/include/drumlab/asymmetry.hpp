#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "drumlab/shape.hpp"
#include "drumlab/vec2.hpp"

namespace drumlab {

namespace detail {

// Radical-inverse (van der Corput) sequence; nested prefixes for any count.
inline double van_der_corput(std::uint64_t k, std::uint32_t base) {
  double inv = 1.0 / base;
  double scale = inv;
  double x = 0.0;
  while (k) {
    x += static_cast<double>(k % base) * scale;
    k /= base;
    scale *= inv;
  }
  return x;
}

// Golden-angle sunflower point set in the unit disc, rotated by `rot`.
// Low-discrepancy for cap and half-plane fractions, so the area-fraction
// estimate at p = 1/2 carries error well under 1e-2 at a few thousand points.
inline std::vector<Vec2> sunflower_points(std::size_t n, double rot) {
  constexpr double golden_angle = 2.3999632297286533;
  std::vector<Vec2> pts;
  pts.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double r = std::sqrt((static_cast<double>(k) + 0.5) / static_cast<double>(n));
    const double th = static_cast<double>(k) * golden_angle + rot;
    pts.push_back({r * std::cos(th), r * std::sin(th)});
  }
  return pts;
}

}  // namespace detail

struct AsymmetryEstimate {
  double alpha = 1.0;    // min exterior area fraction found
  Vec2 witness_point{};  // boundary point attaining the min
  double witness_radius = 0.0;
};

// Estimate of the asymmetry coefficient: the minimum over sampled boundary
// points and radii of the exterior area fraction |B_r(x) \ shape| / |B_r|.
// Boundary samples are the polygon vertices followed by arc-length positions
// from a base-2 radical-inverse sequence; radii are log-uniform in
// [min_radius, diam] at base-3 radical-inverse positions. Both sequences are
// nested, so the estimate is non-increasing in n_boundary and n_radii. The
// same quasi-random ball point set is reused across all pairs; the seed only
// rotates it. The sampled min over-estimates the true infimum.
inline AsymmetryEstimate estimate_asymmetry_detail(const Shape& shape, int n_boundary,
                                                   int n_radii, int n_samples,
                                                   std::uint64_t seed,
                                                   double min_radius = 0.0) {
  if (n_boundary < 1 || n_radii < 1 || n_samples < 1)
    throw std::invalid_argument("estimate_asymmetry needs positive sample counts");
  const double diam = shape.diameter();
  if (min_radius <= 0.0) min_radius = diam / 512.0;
  if (min_radius > diam) min_radius = diam;

  std::mt19937_64 rng(seed);
  const double rot =
      2.0 * M_PI * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  const std::vector<Vec2> unit_pts =
      detail::sunflower_points(static_cast<std::size_t>(n_samples), rot);

  std::vector<Vec2> boundary;
  boundary.reserve(static_cast<std::size_t>(n_boundary));
  if (!shape.is_disc()) {
    for (const Vec2& v : shape.vertices()) {
      if (boundary.size() == static_cast<std::size_t>(n_boundary)) break;
      boundary.push_back(v);
    }
  }
  for (std::uint64_t j = 0; boundary.size() < static_cast<std::size_t>(n_boundary); ++j)
    boundary.push_back(shape.boundary_point(detail::van_der_corput(j, 2)));

  std::vector<double> radii;
  radii.reserve(static_cast<std::size_t>(n_radii));
  const double log_span = std::log(diam / min_radius);
  for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(n_radii); ++j)
    radii.push_back(min_radius * std::exp(log_span * detail::van_der_corput(j, 3)));

  AsymmetryEstimate best;
  best.alpha = 1.0;
  best.witness_point = boundary.front();
  best.witness_radius = radii.front();
  for (const Vec2& x : boundary) {
    for (const double r : radii) {
      int outside = 0;
      for (const Vec2& q : unit_pts)
        if (!shape.contains(x + q * r)) ++outside;
      const double frac = static_cast<double>(outside) / static_cast<double>(n_samples);
      if (frac < best.alpha) {
        best.alpha = frac;
        best.witness_point = x;
        best.witness_radius = r;
      }
    }
  }
  return best;
}

inline double estimate_asymmetry(const Shape& shape, int n_boundary, int n_radii,
                                 int n_samples, std::uint64_t seed,
                                 double min_radius = 0.0) {
  return estimate_asymmetry_detail(shape, n_boundary, n_radii, n_samples, seed, min_radius)
      .alpha;
}

}  // namespace drumlab
