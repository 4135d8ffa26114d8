#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "drumlab/shape.hpp"
#include "drumlab/vec2.hpp"

namespace drumlab {

namespace detail {

// Keep {p . u <= t} of a convex polygon.
inline std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, const Vec2& u,
                                        double t) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const double da = dot(a, u) - t;
    const double db = dot(b, u) - t;
    if (da <= 0) out.push_back(a);
    if ((da < 0 && db > 0) || (da > 0 && db < 0))
      out.push_back(a + (b - a) * (da / (da - db)));
  }
  return out;
}

inline std::vector<Vec2> shape_as_polygon(const Shape& s, int disc_sides = 256) {
  if (!s.is_disc()) return s.vertices();
  std::vector<Vec2> v;
  v.reserve(disc_sides);
  for (int j = 0; j < disc_sides; ++j) {
    const double th = 2.0 * M_PI * j / disc_sides;
    v.push_back(s.disc_center() +
                Vec2{s.disc_radius() * std::cos(th), s.disc_radius() * std::sin(th)});
  }
  return v;
}

// Support interval of p . u over the shape.
inline std::pair<double, double> support_interval(const Shape& s, const Vec2& u) {
  if (s.is_disc()) {
    const double c = dot(s.disc_center(), u);
    return {c - s.disc_radius(), c + s.disc_radius()};
  }
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (const Vec2& v : s.vertices()) {
    const double d = dot(v, u);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return {lo, hi};
}

// Reflection of the cap {p . u > t} across {p . u = t} lies inside the shape.
// The cap must cut the interior; callers handle the empty/full cases.
inline bool cap_reflects_inside(const Shape& s, const Vec2& u, double t, double eps) {
  if (s.is_disc()) return dot(s.disc_center(), u) <= t + eps;
  const std::vector<Vec2> cap = clip_halfplane(s.vertices(), -u, -t);
  for (const Vec2& v : cap) {
    const Vec2 r = v - u * (2.0 * (dot(v, u) - t));
    if (!s.contains(r, eps)) return false;
  }
  return true;
}

}  // namespace detail

// True iff the reflection of {p . u > t} across the line {p . u = t} stays in
// the shape. Containment is checked on the reflected cap vertices, which is
// exact for convex polygons.
inline bool reflect_contained(const Shape& shape, const Hyperplane2D& h) {
  if (!shape.is_convex()) throw std::invalid_argument("reflect_contained needs a convex shape");
  const auto [lo, hi] = detail::support_interval(shape, h.normal);
  const double eps = 1e-12 * (1.0 + shape.diameter());
  if (!(h.offset > lo + eps && h.offset < hi - eps))
    throw std::invalid_argument("hyperplane does not intersect the shape interior");
  return detail::cap_reflects_inside(shape, h.normal, h.offset, 1e-9 * (1.0 + shape.diameter()));
}

struct HeartResult {
  std::vector<Vec2> vertices;  // CCW convex polygon; empty when degenerate
  Vec2 point{0, 0};            // centroid (of the last nonempty clip when degenerate)
  bool degenerate = false;

  double diameter() const {
    if (degenerate) return 0.0;
    double d2 = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
      for (std::size_t j = i + 1; j < vertices.size(); ++j)
        d2 = std::max(d2, norm2(vertices[i] - vertices[j]));
    return std::sqrt(d2);
  }

  // Distance from p to the (closed) heart region.
  double distance_to(const Vec2& p) const {
    if (degenerate || vertices.empty()) return distance(p, point);
    if (vertices.size() == 1) return distance(p, vertices[0]);
    if (vertices.size() == 2) return segment_distance(p, vertices[0], vertices[1]);
    bool inside = true;
    double d = std::numeric_limits<double>::max();
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& a = vertices[i];
      const Vec2& b = vertices[(i + 1) % n];
      if (cross(b - a, p - a) < 0) inside = false;
      d = std::min(d, segment_distance(p, a, b));
    }
    return inside ? 0.0 : d;
  }

  bool contains(const Vec2& p, double tol) const { return distance_to(p) <= tol; }
};

// Outer approximation of the heart: for each sampled direction (uniform on the
// half-circle, both orientations) binary-search the smallest offset whose cap
// reflects inside, then intersect the half-planes {p . u <= t*} with the shape.
// Shrinks monotonically as n_directions doubles.
inline HeartResult heart(const Shape& shape, int n_directions, double tol) {
  if (!shape.is_convex()) throw std::invalid_argument("heart needs a convex shape");
  if (n_directions < 8) throw std::invalid_argument("heart needs n_directions >= 8");
  if (!(tol > 0.0)) throw std::invalid_argument("heart tolerance must be positive");

  const double eps = 1e-12 * (1.0 + shape.diameter());
  const double in_eps = 1e-9 * (1.0 + shape.diameter());

  std::vector<Vec2> poly = detail::shape_as_polygon(shape);
  std::vector<Vec2> last_nonempty = poly;

  for (int k = 0; k < n_directions; ++k) {
    const double th = M_PI * k / n_directions;
    const Vec2 base{std::cos(th), std::sin(th)};
    for (const Vec2 u : {base, -base}) {
      const auto [s_lo, s_hi] = detail::support_interval(shape, u);
      // invariant: the cap at hi reflects inside (empty cap at s_hi), the cap
      // at lo does not (full shape across a tangent line).
      double lo = s_lo;
      double hi = s_hi;
      while (hi - lo > 0.25 * tol) {
        const double mid = 0.5 * (lo + hi);
        bool ok;
        if (mid >= s_hi - eps) {
          ok = true;
        } else if (mid <= s_lo + eps) {
          ok = false;
        } else {
          ok = detail::cap_reflects_inside(shape, u, mid, in_eps);
        }
        (ok ? hi : lo) = mid;
      }
      // Clip a quarter-tolerance outside the certified offset. When the heart
      // is a single point (any shape with two symmetry axes), clipping at hi
      // exactly would collapse the polygon to a segment after the second axis.
      poly = detail::clip_halfplane(poly, u, hi + 0.25 * tol);
      if (poly.size() >= 3 && detail::polygon_signed_area(poly) > eps * eps) {
        last_nonempty = poly;
      } else {
        HeartResult r;
        r.degenerate = true;
        Vec2 c{0, 0};
        for (const Vec2& v : last_nonempty) c += v;
        r.point = c * (1.0 / static_cast<double>(last_nonempty.size()));
        return r;
      }
    }
  }

  HeartResult r;
  r.vertices = poly;
  Vec2 c{0, 0};
  for (const Vec2& v : poly) c += v;
  r.point = c * (1.0 / static_cast<double>(poly.size()));
  return r;
}

}  // namespace drumlab
