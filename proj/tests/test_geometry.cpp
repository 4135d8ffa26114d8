#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "drumlab/asymmetry.hpp"
#include "drumlab/heart.hpp"
#include "drumlab/shape.hpp"
#include "oracle_helpers.hpp"

using namespace drumlab;

namespace {
Shape unit_square() { return Shape::rectangle(0, 0, 1, 1); }
Shape unit_disc() { return Shape::disc({0, 0}, 1.0); }
Shape lshape() {
  return Shape::polygon({{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {0, 1}});
}
}  // namespace

TEST_CASE("point membership") {
  Shape d = unit_disc();
  CHECK(contains(d, {0, 0}));
  CHECK_FALSE(contains(unit_square(), {2, 2}));
  // boundary points count as contained
  CHECK(Shape::rectangle(0, 0, 1, 2).contains({0.5, 1.0}));
  CHECK(unit_square().contains({1.0, 0.5}));
}

TEST_CASE("distance to a translated obstacle") {
  Translate inside{unit_disc(), {0, 0}};
  CHECK(distance_to_translate({0, 0}, inside) == 0.0);

  Translate small{Shape::disc({0, 0}, 0.25), {0, 0}};
  CHECK(distance_to_translate({1, 0}, small) == Catch::Approx(0.75).margin(1e-12));

  Translate sq{unit_square(), {0, 0}};
  CHECK(distance_to_translate({2, 3}, sq) == Catch::Approx(std::sqrt(5.0)).margin(1e-12));

  // zero distance exactly when the point lies in the translate
  for (double x : {-0.3, 0.0, 0.4, 1.0, 1.7}) {
    Vec2 p{x, 0.2};
    bool in = contains(sq.placed(), p);
    double dist = distance_to_translate(p, sq);
    CHECK((dist == 0.0) == in);
  }
}

TEST_CASE("inradius of standard shapes") {
  const double res = 0.01;

  auto [rd, cd] = inradius(unit_disc(), res);
  CHECK(std::abs(rd - 1.0) <= res + 1e-12);
  CHECK(norm(cd) <= 2 * res);

  auto [rs, cs] = inradius(unit_square(), res);
  CHECK(std::abs(rs - 0.5) <= res + 1e-12);
  CHECK(distance(cs, {0.5, 0.5}) <= 2 * res);

  auto [rr, cr] = inradius(Shape::rectangle(0, 0, 1, 2), res);
  CHECK(std::abs(rr - 0.5) <= res + 1e-12);
  // incenter is anywhere on the middle segment {0.5} x [0.5, 1.5]
  CHECK(std::abs(cr.x - 0.5) <= res + 1e-12);
  CHECK(cr.y >= 0.5 - res);
  CHECK(cr.y <= 1.5 + res);
}

TEST_CASE("inradius rejects a resolution coarser than the shape") {
  Shape sliver = Shape::polygon({{0, 0}, {0.002, 0}, {0.001, 0.001}});
  CHECK_THROWS_AS(inradius(sliver, 0.01), std::invalid_argument);
}

TEST_CASE("inradius agrees with the Chebyshev-center LP on convex polygons") {
  const double res = 0.005;
  std::vector<std::vector<Vec2>> polys = {
      {{0, 0}, {1, 0}, {1, 1}, {0, 1}},
      {{0, 0}, {1, 0}, {1, 2}, {0, 2}},
      {{0, 0}, {4, 0}, {1, 2}},
      {{0, 0}, {2, 0}, {3, 1}, {2, 2.5}, {-0.5, 1.5}},
  };
  for (const auto& v : polys) {
    Shape s = Shape::convex_polygon(v);
    auto [r_lp, c_lp] = oracle::chebyshev_center(v);
    auto [r_s, c_s] = inradius(s, res);
    CHECK(std::abs(r_s - r_lp) <= res + 1e-9);
    // the sampled center must itself be nearly optimal
    CHECK(s.interior_clearance(c_s) >= r_lp - res - 1e-9);
    (void)c_lp;
  }
}

TEST_CASE("reflect_contained on the unit square") {
  Shape sq = unit_square();
  CHECK(reflect_contained(sq, Hyperplane2D({1, 0}, 0.7)));
  CHECK_FALSE(reflect_contained(sq, Hyperplane2D({1, 0}, 0.3)));
}

TEST_CASE("reflect_contained through a disc center is always admissible") {
  Shape d = Shape::disc({0.3, -0.2}, 0.8);
  for (double th : {0.0, 0.4, 1.1, 2.0, 2.9}) {
    Vec2 u{std::cos(th), std::sin(th)};
    double t = dot(d.disc_center(), u);
    CHECK(reflect_contained(d, Hyperplane2D(u, t)));
    CHECK(reflect_contained(d, Hyperplane2D(u, t).flipped()));
  }
}

TEST_CASE("both orientations admissible exactly on symmetry lines") {
  Shape sq = unit_square();
  const double s2 = 1.0 / std::sqrt(2.0);

  // the two diagonals and the two axes of the square are symmetry lines
  std::vector<Hyperplane2D> sym = {
      Hyperplane2D({1, 0}, 0.5),
      Hyperplane2D({0, 1}, 0.5),
      Hyperplane2D({s2, s2}, s2),
      Hyperplane2D({s2, -s2}, 0.0),
  };
  for (const auto& h : sym) {
    CHECK(reflect_contained(sq, h));
    CHECK(reflect_contained(sq, h.flipped()));
  }

  Hyperplane2D off({1, 0}, 0.3);
  bool both = reflect_contained(sq, off) && reflect_contained(sq, off.flipped());
  CHECK_FALSE(both);
}

TEST_CASE("reflect_contained requires a cutting hyperplane") {
  CHECK_THROWS_AS(reflect_contained(unit_square(), Hyperplane2D({1, 0}, 1.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(reflect_contained(unit_square(), Hyperplane2D({1, 0}, -0.2)),
                  std::invalid_argument);
}

TEST_CASE("heart of the square collapses to the center") {
  const double tol = 1e-6;
  HeartResult hr = heart(unit_square(), 16, tol);
  CHECK(hr.diameter() <= 2 * tol);
  CHECK(distance(hr.point, {0.5, 0.5}) <= 2 * tol);
}

TEST_CASE("heart of a disc is its center") {
  HeartResult hr = heart(unit_disc(), 32, 1e-5);
  CHECK(norm(hr.point) <= 1e-4);
  CHECK(hr.diameter() <= 1e-4);
}

TEST_CASE("heart of a scalene triangle is a nondegenerate inner polygon") {
  Shape tri = Shape::convex_polygon({{0, 0}, {4, 0}, {1, 2}});
  HeartResult hr = heart(tri, 360, 1e-5);
  CHECK_FALSE(hr.degenerate);
  CHECK(hr.vertices.size() >= 3);
  for (const Vec2& v : hr.vertices) {
    CHECK(tri.contains(v, 1e-9));
    CHECK(tri.interior_clearance(v) > 1e-3);  // strictly inside
  }

  // refining the direction set only shrinks the overapproximation
  HeartResult finer = heart(tri, 720, 1e-5);
  CHECK_FALSE(finer.degenerate);
  for (const Vec2& v : finer.vertices) CHECK(hr.contains(v, 1e-7));
}

TEST_CASE("heart nesting and containment in the shape") {
  for (const Shape& s : {Shape::convex_polygon({{0, 0}, {4, 0}, {1, 2}}),
                         Shape::rectangle(0, 0, 1, 2), unit_disc()}) {
    HeartResult coarse = heart(s, 64, 1e-5);
    HeartResult fine = heart(s, 128, 1e-5);
    for (const Vec2& v : fine.vertices) CHECK(coarse.contains(v, 1e-7));
    for (const Vec2& v : coarse.vertices) CHECK(s.contains(v, 1e-9));
    CHECK(s.contains(coarse.point, 1e-9));
  }
}

TEST_CASE("heart input validation") {
  CHECK_THROWS_AS(heart(lshape(), 64, 1e-5), std::invalid_argument);
  CHECK_THROWS_AS(heart(unit_square(), 4, 1e-5), std::invalid_argument);
  CHECK_THROWS_AS(heart(unit_square(), 64, 0.0), std::invalid_argument);
}

TEST_CASE("asymmetry estimates land in the expected windows") {
  double a_disc = estimate_asymmetry(unit_disc(), 100, 10, 2000, 42);
  CHECK(a_disc >= 0.48);
  CHECK(a_disc <= 0.55);

  double a_sq = estimate_asymmetry(unit_square(), 100, 10, 2000, 42);
  CHECK(a_sq >= 0.48);
  CHECK(a_sq <= 0.60);

  double a_l = estimate_asymmetry(lshape(), 100, 10, 2000, 42);
  CHECK(a_l > 0.0);
  CHECK(a_l <= 0.5);
  // the reentrant corner caps the true value at 1/4
  CHECK(a_l <= 0.27);
}

TEST_CASE("asymmetry is monotone non-increasing in the sample counts") {
  Shape sq = unit_square();
  double a1 = estimate_asymmetry(sq, 50, 8, 1500, 7);
  double a2 = estimate_asymmetry(sq, 100, 8, 1500, 7);
  double a3 = estimate_asymmetry(sq, 100, 16, 1500, 7);
  CHECK(a1 >= a2);
  CHECK(a2 >= a3);

  Shape l = lshape();
  double b1 = estimate_asymmetry(l, 50, 8, 1500, 7);
  double b2 = estimate_asymmetry(l, 100, 16, 1500, 7);
  CHECK(b1 >= b2);
}

TEST_CASE("asymmetry witness is reproducible and on the boundary") {
  AsymmetryEstimate e1 = estimate_asymmetry_detail(lshape(), 80, 10, 1000, 3);
  AsymmetryEstimate e2 = estimate_asymmetry_detail(lshape(), 80, 10, 1000, 3);
  CHECK(e1.alpha == e2.alpha);
  CHECK(e1.witness_point.x == e2.witness_point.x);
  CHECK(e1.witness_point.y == e2.witness_point.y);
  CHECK(e1.witness_radius == e2.witness_radius);
  CHECK(e1.witness_radius > 0.0);
  CHECK(lshape().distance_to(e1.witness_point) <= 1e-9);
}

TEST_CASE("asymmetry input validation") {
  CHECK_THROWS_AS(estimate_asymmetry(unit_square(), 0, 10, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_asymmetry(unit_square(), 10, 0, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_asymmetry(unit_square(), 10, 10, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("shape constructors validate their input") {
  CHECK_THROWS_AS(Shape::disc({0, 0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Shape::polygon({{0, 0}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(Shape::convex_polygon({{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5},
                                         {0.5, 1}, {0, 1}}),
                  std::invalid_argument);
  // self-intersecting bowtie
  CHECK_THROWS_AS(Shape::polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Hyperplane2D({1, 1}, 0.0), std::invalid_argument);
}

TEST_CASE("area perimeter and diameter of reference shapes") {
  CHECK(unit_square().area() == Catch::Approx(1.0));
  CHECK(unit_square().perimeter() == Catch::Approx(4.0));
  CHECK(unit_square().diameter() == Catch::Approx(std::sqrt(2.0)));
  CHECK(unit_disc().area() == Catch::Approx(oracle::pi));
  CHECK(unit_disc().diameter() == Catch::Approx(2.0));
  CHECK(lshape().area() == Catch::Approx(0.75));
}
