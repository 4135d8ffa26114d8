#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "drumlab/dense_oracle.hpp"
#include "drumlab/eigensolver.hpp"
#include "drumlab/grid.hpp"
#include "drumlab/shape.hpp"
#include "drumlab/solve.hpp"
#include "oracle_helpers.hpp"

using namespace drumlab;

namespace {

Shape unit_square() { return Shape::rectangle(0, 0, 1, 1); }

DomainMask full_mask(int nx, int ny, double h) {
  GridSpec g({0, 0}, {nx * h, ny * h}, h);
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(nx) * ny, 1);
  return DomainMask(g, std::move(cells));
}

DomainMask random_mask(int nx, int ny, double h, double p, std::uint64_t seed) {
  GridSpec g({0, 0}, {nx * h, ny * h}, h);
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(nx) * ny, 0);
  for (auto& c : cells) c = ((rng() >> 11) * 0x1.0p-53 < p) ? 1 : 0;
  cells[0] = 1;  // never empty
  return DomainMask(g, std::move(cells));
}

std::vector<double> random_field(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> u(n);
  for (auto& x : u) x = (rng() >> 11) * 0x1.0p-53 - 0.5;
  return u;
}

}  // namespace

TEST_CASE("grid cell centers and counts") {
  GridSpec g({0, 0}, {1, 1}, 0.25);
  CHECK(g.nx() == 4);
  CHECK(g.ny() == 4);
  Vec2 c = g.cell_center(0, 0);
  CHECK(c.x == Catch::Approx(0.125));
  CHECK(c.y == Catch::Approx(0.125));
}

TEST_CASE("rasterizing the unit square captures every interior center") {
  GridSpec g({0, 0}, {1, 1}, 0.25);
  DomainMask m = rasterize(unit_square(), std::nullopt, g);
  CHECK(m.n_active() == 16);
  CHECK(m.area() == Catch::Approx(1.0));
  CHECK(m.connected());
}

TEST_CASE("coarse disc rasterization keeps the four centered cells") {
  GridSpec g({-1, -1}, {1, 1}, 1.0);
  DomainMask m = rasterize(Shape::disc({0, 0}, 1.0), std::nullopt, g);
  // centers (+-0.5, +-0.5) all lie at distance sqrt(0.5) < 1
  CHECK(m.n_active() == 4);
}

TEST_CASE("mask area approximates the geometric area") {
  Shape sq = unit_square();
  Translate hole{Shape::disc({0, 0}, 0.3), {0.5, 0.5}};
  GridSpec g({0, 0}, {1, 1}, 1.0 / 64);
  DomainMask m = rasterize(sq, hole, g);
  const double exact = 1.0 - oracle::pi * 0.09;
  CHECK(std::abs(m.area() - exact) <= 0.05 * exact);
}

TEST_CASE("mask area error shrinks under refinement for convex shapes") {
  Shape d = Shape::disc({0, 0}, 1.0);
  const double exact = oracle::pi;
  double h = 0.11;
  GridSpec g1({-1.1, -1.1}, {1.1, 1.1}, h);
  GridSpec g2({-1.1, -1.1}, {1.1, 1.1}, h / 2);
  double e1 = std::abs(rasterize(d, std::nullopt, g1).area() - exact);
  double e2 = std::abs(rasterize(d, std::nullopt, g2).area() - exact);
  CHECK(e2 <= e1 + 1e-12);
}

TEST_CASE("rasterize rejects an empty discretized domain") {
  Translate cover{Shape::disc({0, 0}, 10.0), {0.5, 0.5}};
  GridSpec g({0, 0}, {1, 1}, 0.25);
  CHECK_THROWS_WITH(rasterize(unit_square(), cover, g),
                    Catch::Matchers::ContainsSubstring("empty"));
}

TEST_CASE("stencil action on a delta field") {
  const double h = 0.25;
  DomainMask m = full_mask(4, 4, h);
  StencilOperator op(m);
  std::vector<double> u(m.n_active(), 0.0), out(m.n_active());
  const std::int32_t c = m.index_of(1, 1);
  u[static_cast<std::size_t>(c)] = 1.0;
  op.apply(u, out);
  const double inv_h2 = 1.0 / (h * h);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      const double v = out[static_cast<std::size_t>(m.index_of(i, j))];
      if (i == 1 && j == 1)
        CHECK(v == Catch::Approx(4.0 * inv_h2));
      else if (std::abs(i - 1) + std::abs(j - 1) == 1)
        CHECK(v == Catch::Approx(-inv_h2));
      else
        CHECK(v == 0.0);
    }
  }
}

TEST_CASE("stencil action on a constant field counts missing neighbors") {
  const double h = 0.25;
  DomainMask m = full_mask(4, 4, h);
  StencilOperator op(m);
  std::vector<double> u(m.n_active(), 1.0), out(m.n_active());
  op.apply(u, out);
  const double inv_h2 = 1.0 / (h * h);
  // interior cell: all four neighbors active
  CHECK(out[static_cast<std::size_t>(m.index_of(1, 1))] == Catch::Approx(0.0).margin(1e-12));
  // edge cell: three neighbors
  CHECK(out[static_cast<std::size_t>(m.index_of(1, 0))] == Catch::Approx(inv_h2));
  // corner cell: two neighbors
  CHECK(out[static_cast<std::size_t>(m.index_of(0, 0))] == Catch::Approx(2.0 * inv_h2));
}

TEST_CASE("stencil apply validates field length") {
  DomainMask m = full_mask(3, 3, 1.0);
  StencilOperator op(m);
  std::vector<double> u(5, 0.0), out(m.n_active());
  CHECK_THROWS_AS(op.apply(u, out), std::invalid_argument);
}

TEST_CASE("stencil operator is symmetric and positive semidefinite") {
  DomainMask m = random_mask(20, 20, 1.0, 0.7, 99);
  StencilOperator op(m);
  const std::size_t n = m.n_active();
  std::vector<double> lu(n), lv(n);
  for (int trial = 0; trial < 100; ++trial) {
    auto u = random_field(n, 1000 + trial);
    auto v = random_field(n, 5000 + trial);
    op.apply(u, lu);
    op.apply(v, lv);
    const double a = dot(lu, v), b = dot(u, lv);
    const double nu = std::sqrt(dot(u, u)), nv = std::sqrt(dot(v, v));
    CHECK(std::abs(a - b) <= 1e-12 * nu * nv);
    CHECK(dot(lu, u) >= -1e-12 * nu * nu);
  }
}

TEST_CASE("PGM serialization of a tiny mask") {
  DomainMask m = full_mask(2, 2, 0.5);
  CHECK(mask_to_pgm(m) ==
        "P2\n# h=0.5 box=0 0 1 1\n2 2\n255\n255 255\n255 255\n");
  std::vector<double> u = {1.0, 0.5, 0.5, 0.25};
  // top row (j=1) first: values 0.5 0.25 then 1.0 0.5, scaled by 255
  CHECK(field_to_pgm(m, u) ==
        "P2\n# h=0.5 box=0 0 1 1\n2 2\n255\n128 64\n255 128\n");
}

TEST_CASE("dense spectrum of one and two cells") {
  const double h = 0.5;
  {
    GridSpec g({0, 0}, {h, h}, h);
    DomainMask m(g, {1});
    DenseSpectrum sp = dense_oracle(StencilOperator(m));
    REQUIRE(sp.eigenvalues.size() == 1);
    CHECK(sp.eigenvalues[0] == Catch::Approx(4.0 / (h * h)));
  }
  {
    GridSpec g({0, 0}, {2 * h, h}, h);
    DomainMask m(g, {1, 1});
    DenseSpectrum sp = dense_oracle(StencilOperator(m));
    REQUIRE(sp.eigenvalues.size() == 2);
    CHECK(sp.eigenvalues[0] == Catch::Approx(3.0 / (h * h)));
    CHECK(sp.eigenvalues[1] == Catch::Approx(5.0 / (h * h)));
    CHECK(sp.ground_state[0] > 0.0);
    CHECK(sp.ground_state[1] > 0.0);
  }
}

TEST_CASE("iterative solver matches the dense oracle on a 16x16 grid") {
  auto m = std::make_shared<const DomainMask>(full_mask(16, 16, 1.0 / 16));
  DenseSpectrum sp = dense_oracle(StencilOperator(*m));
  SpectralResult r = solve_mask(m, 1e-7, 500);
  CHECK(std::abs(r.lambda1 - sp.eigenvalues[0]) <= 1e-8 * sp.eigenvalues[0]);
  // the iterate's Rayleigh quotient bounds the true value from above,
  // and residual-shifted from below
  CHECK(r.lambda1 >= sp.eigenvalues[0] - 1e-10);
  CHECK(r.lambda1 - r.residual * r.lambda1 <= sp.eigenvalues[0] + 1e-10);
  CHECK(r.residual <= 1e-7 * r.lambda1 * 1.0000001);
  for (double v : r.phi) CHECK(v > 0.0);
}

TEST_CASE("extrapolated eigenvalues hit the closed forms") {
  {
    LevelPair lp = solve_extrapolated(unit_square(), std::nullopt, 1.0 / 64, 1e-7);
    const double exact = oracle::rect_lambda(1, 1);
    CHECK(std::abs(lp.lambda_extrap - exact) <= 0.005 * exact);
    // extrapolation beats the fine level alone
    CHECK(std::abs(lp.lambda_extrap - exact) < std::abs(lp.fine.lambda1 - exact));
  }
  {
    LevelPair lp =
        solve_extrapolated(Shape::disc({0, 0}, 1.0), std::nullopt, 1.0 / 64, 1e-7);
    const double exact = oracle::j0_first_zero() * oracle::j0_first_zero();
    CHECK(std::abs(lp.lambda_extrap - exact) <= 0.01 * exact);
  }
  {
    LevelPair lp =
        solve_extrapolated(Shape::rectangle(0, 0, 1, 2), std::nullopt, 1.0 / 64, 1e-7);
    const double exact = oracle::rect_lambda(1, 2);
    CHECK(std::abs(lp.lambda_extrap - exact) <= 0.005 * exact);
  }
}

TEST_CASE("single-level solves carry first-order boundary error") {
  SpectralResult r = solve_shape(unit_square(), std::nullopt, 1.0 / 64, 1e-7);
  const double exact = oracle::rect_lambda(1, 1);
  // Dirichlet-by-exclusion places the wall half a cell outside each face,
  // so the plain value sits a few percent low; extrapolation removes this.
  CHECK(r.lambda1 < exact);
  CHECK(std::abs(r.lambda1 - exact) <= 0.04 * exact);
  CHECK(std::abs(r.lambda1 - exact) >= 0.005 * exact);
}

TEST_CASE("Richardson extrapolation identities") {
  Extrapolation same = refine_extrapolate(10.0, 10.0);
  CHECK(same.lambda_extrap == 10.0);
  CHECK(std::isnan(same.order));

  SpectralResult a = solve_shape(unit_square(), std::nullopt, 1.0 / 32, 1e-7);
  SpectralResult b = solve_shape(unit_square(), std::nullopt, 1.0 / 64, 1e-7);
  const double exact = oracle::rect_lambda(1, 1);
  Extrapolation e = refine_extrapolate(a.lambda1, b.lambda1);
  CHECK(std::abs(e.lambda_extrap - exact) < std::abs(b.lambda1 - exact));
}

TEST_CASE("observed convergence order on the disc is near one") {
  Shape d = Shape::disc({0, 0}, 1.0);
  GridSpec g32({-1, -1}, {1, 1}, 1.0 / 16);
  GridSpec g64({-1, -1}, {1, 1}, 1.0 / 32);
  GridSpec g128({-1, -1}, {1, 1}, 1.0 / 64);
  double l1 = solve_shape(d, std::nullopt, g32, 1e-7).lambda1;
  double l2 = solve_shape(d, std::nullopt, g64, 1e-7).lambda1;
  double l3 = solve_shape(d, std::nullopt, g128, 1e-7).lambda1;
  Extrapolation e = refine_extrapolate(l1, l2, l3);
  CHECK_FALSE(std::isnan(e.order));
  CHECK(e.order >= 0.8);
  CHECK(e.order <= 2.2);
}

TEST_CASE("solver validates its tolerance") {
  auto m = std::make_shared<const DomainMask>(full_mask(4, 4, 0.25));
  CHECK_THROWS_AS(solve_mask(m, 1e-3, 100), std::invalid_argument);
  CHECK_THROWS_AS(solve_mask(m, 0.0, 100), std::invalid_argument);
}

TEST_CASE("iteration cap raises an error that carries the best iterate") {
  auto m = std::make_shared<const DomainMask>(full_mask(24, 24, 1.0 / 24));
  try {
    solve_mask(m, 1e-8, 1);
    FAIL("expected SolveError");
  } catch (const SolveError& e) {
    CHECK(std::string(e.what()).find("max_iter") != std::string::npos);
    CHECK(e.best_iterate.lambda1 > 0.0);
    CHECK(e.best_iterate.phi.size() == m->n_active());
  }
}

TEST_CASE("disconnected masks are flagged and solved on one component") {
  GridSpec g({0, 0}, {3, 3}, 1.0);
  std::vector<std::uint8_t> cells(9, 0);
  cells[0] = 1;  // (0,0)
  cells[8] = 1;  // (2,2)
  auto m = std::make_shared<const DomainMask>(g, std::move(cells));
  SpectralResult r = solve_mask(m, 1e-8, 100);
  CHECK(r.disconnected);
  CHECK(r.n_components == 2);
  CHECK(r.lambda1 == Catch::Approx(4.0));
  int positive = 0;
  for (double v : r.phi) positive += (v > 0.0) ? 1 : 0;
  CHECK(positive == 1);
}

TEST_CASE("ground state is strictly positive on a connected random mask") {
  DomainMask rm = random_mask(12, 12, 1.0 / 12, 0.8, 4242);
  int n_comp = 0;
  auto labels = rm.component_labels(&n_comp);
  std::vector<std::size_t> sizes(static_cast<std::size_t>(n_comp), 0);
  for (std::int32_t c : labels)
    if (c >= 0) ++sizes[static_cast<std::size_t>(c)];
  std::int32_t biggest = 0;
  for (std::int32_t c = 1; c < n_comp; ++c)
    if (sizes[static_cast<std::size_t>(c)] > sizes[static_cast<std::size_t>(biggest)])
      biggest = c;
  auto m = std::make_shared<const DomainMask>(rm.component(labels, biggest));
  SpectralResult r = solve_mask(m, 1e-8, 500);
  CHECK_FALSE(r.disconnected);
  for (double v : r.phi) CHECK(v > 0.0);
}
