#pragma once

// Independent reference values for the tests: closed-form eigenvalues,
// a Bessel zero recomputed from scratch, and a small LP for the Chebyshev
// center of a convex polygon. Nothing here calls into the library's own
// numerics beyond Vec2 arithmetic.

#include <cmath>
#include <utility>
#include <vector>

#include "drumlab/vec2.hpp"

namespace oracle {

constexpr double pi = 3.14159265358979323846;

// Dirichlet ground eigenvalue of an a x b rectangle.
inline double rect_lambda(double a, double b) {
  return pi * pi * (1.0 / (a * a) + 1.0 / (b * b));
}

// Equilateral triangle of side a.
inline double equilateral_lambda(double a) {
  return 16.0 * pi * pi / (3.0 * a * a);
}

// Right isoceles triangle with unit legs (half of the unit square).
inline double right_isoceles_lambda() { return 5.0 * pi * pi; }

// First zero of J0 by bisection against the standard library Bessel
// function. J0(2) > 0 > J0(3) brackets it.
inline double j0_first_zero() {
  double lo = 2.0, hi = 3.0;
  for (int k = 0; k < 80; ++k) {
    double mid = 0.5 * (lo + hi);
    if (std::cyl_bessel_j(0.0, mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Chebyshev center of a convex polygon (CCW) by enumerating triples of
// edge constraints. The LP max r s.t. n_i . p - r >= d_i attains its
// optimum with three active constraints (or at a segment endpoint, which
// again has three), so checking all triples is exact up to roundoff.
inline std::pair<double, drumlab::Vec2> chebyshev_center(
    const std::vector<drumlab::Vec2>& poly) {
  using drumlab::Vec2;
  const size_t m = poly.size();
  std::vector<Vec2> n(m);
  std::vector<double> d(m);
  for (size_t i = 0; i < m; ++i) {
    Vec2 a = poly[i], b = poly[(i + 1) % m];
    Vec2 e{b.x - a.x, b.y - a.y};
    double len = std::hypot(e.x, e.y);
    // inward normal for CCW orientation
    n[i] = Vec2{-e.y / len, e.x / len};
    d[i] = n[i].x * a.x + n[i].y * a.y;
  }
  double best_r = -1.0;
  Vec2 best_p{0, 0};
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j)
      for (size_t k = j + 1; k < m; ++k) {
        // Solve [n_i -1; n_j -1; n_k -1] [px py r]^T = [d_i d_j d_k]^T.
        double a11 = n[i].x, a12 = n[i].y, a21 = n[j].x, a22 = n[j].y,
               a31 = n[k].x, a32 = n[k].y;
        double det = a11 * (a22 * (-1) - (-1) * a32) -
                     a12 * (a21 * (-1) - (-1) * a31) +
                     (-1) * (a21 * a32 - a22 * a31);
        if (std::abs(det) < 1e-14) continue;
        double b1 = d[i], b2 = d[j], b3 = d[k];
        double px = (b1 * (a22 * (-1) - (-1) * a32) -
                     a12 * (b2 * (-1) - (-1) * b3) +
                     (-1) * (b2 * a32 - a22 * b3)) /
                    det;
        double py = (a11 * (b2 * (-1) - (-1) * b3) -
                     b1 * (a21 * (-1) - (-1) * a31) +
                     (-1) * (a21 * b3 - b2 * a31)) /
                    det;
        double r = (a11 * (a22 * b3 - b2 * a32) -
                    a12 * (a21 * b3 - b2 * a31) +
                    b1 * (a21 * a32 - a22 * a31)) /
                   det;
        if (r < 0) continue;
        bool feasible = true;
        for (size_t q = 0; q < m; ++q)
          if (n[q].x * px + n[q].y * py - r < d[q] - 1e-9) {
            feasible = false;
            break;
          }
        if (feasible && r > best_r) {
          best_r = r;
          best_p = Vec2{px, py};
        }
      }
  return {best_r, best_p};
}

}  // namespace oracle
