#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "drumlab/vec2.hpp"

namespace drumlab {

enum class ShapeKind { Disc, ConvexPolygon, Polygon };

struct BBox {
  Vec2 lo;
  Vec2 hi;

  bool contains(const Vec2& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
  Vec2 center() const { return {(lo.x + hi.x) * 0.5, (lo.y + hi.y) * 0.5}; }
  BBox translated(const Vec2& d) const { return {lo + d, hi + d}; }
};

namespace detail {

inline double polygon_signed_area(const std::vector<Vec2>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % v.size()];
    a += cross(p, q);
  }
  return 0.5 * a;
}

inline bool segments_properly_intersect(const Vec2& a, const Vec2& b, const Vec2& c,
                                        const Vec2& d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

inline bool polygon_is_simple(const std::vector<Vec2>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // skip adjacent edges (they share an endpoint)
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_properly_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
        return false;
    }
  }
  return true;
}

inline bool polygon_is_convex(const std::vector<Vec2>& v) {
  const std::size_t n = v.size();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, norm2(v[(i + 1) % n] - v[i]));
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e1 = v[(i + 1) % n] - v[i];
    const Vec2 e2 = v[(i + 2) % n] - v[(i + 1) % n];
    if (cross(e1, e2) < -1e-12 * scale) return false;
  }
  return true;
}

}  // namespace detail

// A planar region: a disc or a simple polygon (optionally tagged convex).
// Polygon vertices are stored counter-clockwise.
class Shape {
 public:
  static Shape disc(Vec2 center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("disc radius must be positive");
    Shape s;
    s.kind_ = ShapeKind::Disc;
    s.center_ = center;
    s.radius_ = radius;
    return s;
  }

  static Shape polygon(std::vector<Vec2> vertices, bool require_convex = false) {
    if (vertices.size() < 3) throw std::invalid_argument("polygon needs >= 3 vertices");
    double a = detail::polygon_signed_area(vertices);
    if (a < 0) {  // normalize to counter-clockwise
      std::reverse(vertices.begin(), vertices.end());
      a = -a;
    }
    if (!(a > 0.0)) throw std::invalid_argument("polygon area must be positive");
    if (!detail::polygon_is_simple(vertices))
      throw std::invalid_argument("polygon must be simple (no self-intersection)");
    const bool convex = detail::polygon_is_convex(vertices);
    if (require_convex && !convex)
      throw std::invalid_argument("polygon is not convex");
    Shape s;
    s.kind_ = convex ? ShapeKind::ConvexPolygon : ShapeKind::Polygon;
    s.vertices_ = std::move(vertices);
    return s;
  }

  static Shape convex_polygon(std::vector<Vec2> vertices) {
    return polygon(std::move(vertices), /*require_convex=*/true);
  }

  // Axis-aligned rectangle [x0,x1] x [y0,y1].
  static Shape rectangle(double x0, double y0, double x1, double y1) {
    return convex_polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
  }

  ShapeKind kind() const { return kind_; }
  bool is_disc() const { return kind_ == ShapeKind::Disc; }
  bool is_convex() const { return kind_ != ShapeKind::Polygon; }
  Vec2 disc_center() const { return center_; }
  double disc_radius() const { return radius_; }
  const std::vector<Vec2>& vertices() const { return vertices_; }

  double area() const {
    if (is_disc()) return M_PI * radius_ * radius_;
    return detail::polygon_signed_area(vertices_);
  }

  double perimeter() const {
    if (is_disc()) return 2.0 * M_PI * radius_;
    double p = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      p += distance(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
    return p;
  }

  BBox bbox() const {
    if (is_disc())
      return {{center_.x - radius_, center_.y - radius_},
              {center_.x + radius_, center_.y + radius_}};
    Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    Vec2 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    for (const Vec2& v : vertices_) {
      lo.x = std::min(lo.x, v.x);
      lo.y = std::min(lo.y, v.y);
      hi.x = std::max(hi.x, v.x);
      hi.y = std::max(hi.y, v.y);
    }
    return {lo, hi};
  }

  double diameter() const {
    if (is_disc()) return 2.0 * radius_;
    double d2 = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      for (std::size_t j = i + 1; j < vertices_.size(); ++j)
        d2 = std::max(d2, norm2(vertices_[i] - vertices_[j]));
    return std::sqrt(d2);
  }

  Vec2 centroid() const {
    if (is_disc()) return center_;
    double a = 0.0;
    Vec2 c{0, 0};
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const Vec2& p = vertices_[i];
      const Vec2& q = vertices_[(i + 1) % vertices_.size()];
      const double w = cross(p, q);
      a += w;
      c += (p + q) * w;
    }
    return c * (1.0 / (3.0 * a));
  }

  // Membership in the closed region.
  bool contains(const Vec2& p, double eps = 0.0) const {
    if (is_disc()) return distance(p, center_) <= radius_ + eps;
    if (boundary_distance_abs(p) <= std::max(eps, 1e-12 * (1.0 + diameter()))) return true;
    // even-odd crossing test for strictly interior/exterior points
    bool inside = false;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Vec2& a = vertices_[i];
      const Vec2& b = vertices_[j];
      if ((a.y > p.y) != (b.y > p.y)) {
        const double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
        if (p.x < xint) inside = !inside;
      }
    }
    return inside;
  }

  // Euclidean distance to the closed region (0 inside).
  double distance_to(const Vec2& p) const {
    if (is_disc()) return std::max(0.0, distance(p, center_) - radius_);
    if (contains(p)) return 0.0;
    return boundary_distance_abs(p);
  }

  // Distance to the boundary curve, regardless of sidedness.
  double boundary_distance_abs(const Vec2& p) const {
    if (is_disc()) return std::abs(distance(p, center_) - radius_);
    double d = std::numeric_limits<double>::max();
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i)
      d = std::min(d, segment_distance(p, vertices_[i], vertices_[(i + 1) % n]));
    return d;
  }

  // Distance from an interior point to the complement; 0 outside the region.
  double interior_clearance(const Vec2& p) const {
    if (!contains(p)) return 0.0;
    if (is_disc()) return std::max(0.0, radius_ - distance(p, center_));
    return boundary_distance_abs(p);
  }

  // Point on the boundary at arc-length parameter s in [0,1).
  Vec2 boundary_point(double s) const {
    s -= std::floor(s);
    if (is_disc()) {
      const double th = 2.0 * M_PI * s;
      return center_ + Vec2{radius_ * std::cos(th), radius_ * std::sin(th)};
    }
    const double target = s * perimeter();
    double acc = 0.0;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& a = vertices_[i];
      const Vec2& b = vertices_[(i + 1) % n];
      const double len = distance(a, b);
      if (acc + len >= target || i + 1 == n) {
        const double t = len > 0 ? std::clamp((target - acc) / len, 0.0, 1.0) : 0.0;
        return a + (b - a) * t;
      }
      acc += len;
    }
    return vertices_[0];
  }

  Shape translated(const Vec2& d) const {
    Shape s = *this;
    if (is_disc()) {
      s.center_ += d;
    } else {
      for (Vec2& v : s.vertices_) v += d;
    }
    return s;
  }

  // Default is the unit disc at the origin; aggregates holding a Shape
  // (landscapes, reports) overwrite it before use.
  Shape() = default;

 private:
  ShapeKind kind_ = ShapeKind::Disc;
  Vec2 center_{};
  double radius_ = 1.0;
  std::vector<Vec2> vertices_;
};

// A translated obstacle x + D. The offset applies to the obstacle shape as-is;
// overlap with the ambient domain's boundary is permitted.
struct Translate {
  Shape obstacle;
  Vec2 offset{0, 0};

  Shape placed() const { return obstacle.translated(offset); }
};

inline bool contains(const Shape& s, const Vec2& p) { return s.contains(p); }

// Distance from p to the closed set x + D (0 if p lies in it).
inline double distance_to_translate(const Vec2& p, const Translate& t) {
  return t.obstacle.distance_to(p - t.offset);
}

// A line {p . u = t} with unit normal u.
struct Hyperplane2D {
  Vec2 normal;
  double offset = 0.0;

  Hyperplane2D(Vec2 u, double t) : normal(u), offset(t) {
    if (std::abs(norm(u) - 1.0) > 1e-12)
      throw std::invalid_argument("hyperplane normal must be unit length");
  }

  double signed_distance(const Vec2& p) const { return dot(p, normal) - offset; }

  Vec2 reflect(const Vec2& p) const {
    return p - normal * (2.0 * signed_distance(p));
  }

  Hyperplane2D flipped() const { return Hyperplane2D(-normal, -offset); }
};

// Largest inscribed ball found by sampling candidate centers on a grid of the
// given spacing. For convex shapes the radius is within one resolution step of
// the true inradius.
inline std::pair<double, Vec2> inradius(const Shape& shape, double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  if (shape.area() < resolution * resolution)
    throw std::invalid_argument("shape degenerate at this resolution");
  const BBox bb = shape.bbox();
  double best = -1.0;
  Vec2 best_p = bb.center();
  for (double y = bb.lo.y + resolution * 0.5; y <= bb.hi.y; y += resolution) {
    for (double x = bb.lo.x + resolution * 0.5; x <= bb.hi.x; x += resolution) {
      const Vec2 p{x, y};
      const double r = shape.interior_clearance(p);
      if (r > best) {
        best = r;
        best_p = p;
      }
    }
  }
  if (best < 0.0) throw std::invalid_argument("shape degenerate at this resolution");
  return {best, best_p};
}

}  // namespace drumlab
