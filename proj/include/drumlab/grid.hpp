#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "drumlab/shape.hpp"
#include "drumlab/vec2.hpp"

namespace drumlab {

// Uniform cell-centered grid over a bounding box.
struct GridSpec {
  Vec2 box_lo{0, 0};
  Vec2 box_hi{1, 1};
  double h = 0.0;

  GridSpec() = default;
  GridSpec(Vec2 lo, Vec2 hi, double spacing) : box_lo(lo), box_hi(hi), h(spacing) {
    if (!(h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    if (!(hi.x > lo.x && hi.y > lo.y))
      throw std::invalid_argument("grid box must have positive extent");
  }

  int nx() const { return static_cast<int>(std::ceil((box_hi.x - box_lo.x) / h - 1e-12)); }
  int ny() const { return static_cast<int>(std::ceil((box_hi.y - box_lo.y) / h - 1e-12)); }

  Vec2 cell_center(int i, int j) const {
    return {box_lo.x + (i + 0.5) * h, box_lo.y + (j + 0.5) * h};
  }

  bool covers(const BBox& bb, double eps = 1e-12) const {
    return bb.lo.x >= box_lo.x - eps && bb.lo.y >= box_lo.y - eps &&
           bb.hi.x <= box_hi.x + eps && bb.hi.y <= box_hi.y + eps;
  }
};

// Occupancy mask over a grid: true cells carry unknowns, false cells are hard
// Dirichlet zeros. Cell (i, j) maps to raster index j*nx + i.
class DomainMask {
 public:
  DomainMask(GridSpec spec, std::vector<std::uint8_t> active)
      : spec_(spec), active_(std::move(active)) {
    const std::size_t ncells =
        static_cast<std::size_t>(spec_.nx()) * static_cast<std::size_t>(spec_.ny());
    if (active_.size() != ncells) throw std::invalid_argument("mask size mismatch");
    cell_to_idx_.assign(ncells, -1);
    for (std::size_t c = 0; c < ncells; ++c) {
      if (active_[c]) {
        cell_to_idx_[c] = static_cast<std::int32_t>(idx_to_cell_.size());
        idx_to_cell_.push_back(static_cast<std::int32_t>(c));
      }
    }
  }

  const GridSpec& spec() const { return spec_; }
  int nx() const { return spec_.nx(); }
  int ny() const { return spec_.ny(); }
  std::size_t n_active() const { return idx_to_cell_.size(); }
  double area() const { return static_cast<double>(n_active()) * spec_.h * spec_.h; }

  bool is_active_cell(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx() || j >= ny()) return false;
    return active_[static_cast<std::size_t>(j) * nx() + i] != 0;
  }
  std::int32_t index_of(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx() || j >= ny()) return -1;
    return cell_to_idx_[static_cast<std::size_t>(j) * nx() + i];
  }
  std::pair<int, int> cell_of(std::size_t idx) const {
    const std::int32_t c = idx_to_cell_[idx];
    return {c % nx(), c / nx()};
  }
  Vec2 point_of(std::size_t idx) const {
    const auto [i, j] = cell_of(idx);
    return spec_.cell_center(i, j);
  }
  const std::vector<std::int32_t>& active_cells() const { return idx_to_cell_; }

  // Nearest active index to p (same cell, else smallest Euclidean distance),
  // or -1 when the mask is empty.
  std::int32_t nearest_active(const Vec2& p) const {
    const int i = static_cast<int>(std::floor((p.x - spec_.box_lo.x) / spec_.h));
    const int j = static_cast<int>(std::floor((p.y - spec_.box_lo.y) / spec_.h));
    const std::int32_t direct = index_of(i, j);
    if (direct >= 0) return direct;
    std::int32_t best = -1;
    double best_d = std::numeric_limits<double>::max();
    for (std::size_t k = 0; k < idx_to_cell_.size(); ++k) {
      const double d = norm2(point_of(k) - p);
      if (d < best_d) {
        best_d = d;
        best = static_cast<std::int32_t>(k);
      }
    }
    return best;
  }

  // Connected-component labels (4-neighborhood) per active index.
  // Components are numbered 0.. in order of first raster appearance.
  std::vector<std::int32_t> component_labels(int* n_components = nullptr) const {
    std::vector<std::int32_t> label(n_active(), -1);
    std::int32_t comp = 0;
    std::vector<std::int32_t> stack;
    for (std::size_t s = 0; s < n_active(); ++s) {
      if (label[s] >= 0) continue;
      stack.push_back(static_cast<std::int32_t>(s));
      label[s] = comp;
      while (!stack.empty()) {
        const std::int32_t cur = stack.back();
        stack.pop_back();
        const auto [i, j] = cell_of(static_cast<std::size_t>(cur));
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const std::int32_t nb = index_of(i + di[k], j + dj[k]);
          if (nb >= 0 && label[static_cast<std::size_t>(nb)] < 0) {
            label[static_cast<std::size_t>(nb)] = comp;
            stack.push_back(nb);
          }
        }
      }
      ++comp;
    }
    if (n_components) *n_components = comp;
    return label;
  }

  bool connected() const {
    int n = 0;
    component_labels(&n);
    return n <= 1;
  }

  // Mask restricted to one component.
  DomainMask component(const std::vector<std::int32_t>& labels, std::int32_t which) const {
    std::vector<std::uint8_t> act(active_.size(), 0);
    for (std::size_t k = 0; k < n_active(); ++k)
      if (labels[k] == which) act[static_cast<std::size_t>(idx_to_cell_[k])] = 1;
    return DomainMask(spec_, std::move(act));
  }

 private:
  GridSpec spec_;
  std::vector<std::uint8_t> active_;
  std::vector<std::int32_t> cell_to_idx_;
  std::vector<std::int32_t> idx_to_cell_;
};

namespace detail {

inline DomainMask rasterize_unchecked(const Shape& domain,
                                      const std::optional<Translate>& obstacle,
                                      const GridSpec& grid) {
  const int nx = grid.nx();
  const int ny = grid.ny();
  std::vector<std::uint8_t> act(static_cast<std::size_t>(nx) * ny, 0);
  std::optional<Shape> placed;
  BBox obb{{0, 0}, {0, 0}};
  if (obstacle) {
    placed = obstacle->placed();
    obb = placed->bbox();
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Vec2 c = grid.cell_center(i, j);
      if (!domain.contains(c)) continue;
      if (placed && obb.contains(c) && placed->contains(c)) continue;
      act[static_cast<std::size_t>(j) * nx + i] = 1;
    }
  }
  return DomainMask(grid, std::move(act));
}

}  // namespace detail

// Cell active iff its center lies in the domain and not in the translated
// obstacle. Inactive cells are hard zeros (Dirichlet by exclusion), so
// removing cells can only raise the discrete ground eigenvalue.
inline DomainMask rasterize(const Shape& domain, const std::optional<Translate>& obstacle,
                            const GridSpec& grid) {
  if (!grid.covers(domain.bbox()))
    throw std::invalid_argument("grid box does not contain the domain");
  DomainMask m = detail::rasterize_unchecked(domain, obstacle, grid);
  if (m.n_active() == 0) throw std::runtime_error("empty discretized domain");
  return m;
}

// Matrix-free 5-point Dirichlet Laplacian on the active cells:
// (Lu)_i = (4 u_i - sum of active-neighbor values) / h^2.
class StencilOperator {
 public:
  explicit StencilOperator(const DomainMask& mask) : mask_(&mask) {
    const std::size_t n = mask.n_active();
    nbr_.assign(4 * n, -1);
    for (std::size_t k = 0; k < n; ++k) {
      const auto [i, j] = mask.cell_of(k);
      nbr_[4 * k + 0] = mask.index_of(i + 1, j);
      nbr_[4 * k + 1] = mask.index_of(i - 1, j);
      nbr_[4 * k + 2] = mask.index_of(i, j + 1);
      nbr_[4 * k + 3] = mask.index_of(i, j - 1);
    }
    inv_h2_ = 1.0 / (mask.spec().h * mask.spec().h);
  }

  const DomainMask& mask() const { return *mask_; }
  std::size_t size() const { return mask_->n_active(); }

  void apply(const std::vector<double>& u, std::vector<double>& out) const {
    if (u.size() != size()) throw std::invalid_argument("field length mismatch");
    out.resize(size());
    for (std::size_t k = 0; k < u.size(); ++k) {
      double s = 4.0 * u[k];
      for (int q = 0; q < 4; ++q) {
        const std::int32_t nb = nbr_[4 * k + q];
        if (nb >= 0) s -= u[static_cast<std::size_t>(nb)];
      }
      out[k] = s * inv_h2_;
    }
  }

  std::vector<double> apply(const std::vector<double>& u) const {
    std::vector<double> out;
    apply(u, out);
    return out;
  }

 private:
  const DomainMask* mask_;
  std::vector<std::int32_t> nbr_;
  double inv_h2_ = 1.0;
};

// Chunked summation: partials are accumulated per fixed-size chunk and then
// combined in chunk order, so the result does not depend on how work is split.
inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot length mismatch");
  constexpr std::size_t chunk = 4096;
  double total = 0.0;
  for (std::size_t base = 0; base < a.size(); base += chunk) {
    const std::size_t end = std::min(a.size(), base + chunk);
    double part = 0.0;
    for (std::size_t k = base; k < end; ++k) part += a[k] * b[k];
    total += part;
  }
  return total;
}

inline double norm2_field(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// P2 PGM (0 = inactive, 255 = active); h and box recorded in a comment.
// Rows are emitted top-down so the image is upright with y increasing upward.
inline std::string mask_to_pgm(const DomainMask& mask) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "# h=%.17g box=%.17g %.17g %.17g %.17g\n",
                mask.spec().h, mask.spec().box_lo.x, mask.spec().box_lo.y,
                mask.spec().box_hi.x, mask.spec().box_hi.y);
  os << "P2\n" << buf << mask.nx() << " " << mask.ny() << "\n255\n";
  for (int j = mask.ny() - 1; j >= 0; --j) {
    for (int i = 0; i < mask.nx(); ++i) {
      os << (mask.is_active_cell(i, j) ? 255 : 0);
      os << (i + 1 == mask.nx() ? '\n' : ' ');
    }
  }
  return os.str();
}

// P2 PGM of a nonnegative field on the mask, rescaled so max value maps to 255.
inline std::string field_to_pgm(const DomainMask& mask, const std::vector<double>& u) {
  if (u.size() != mask.n_active()) throw std::invalid_argument("field length mismatch");
  const double m = max_abs(u);
  const double scale = m > 0 ? 255.0 / m : 0.0;
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "# h=%.17g box=%.17g %.17g %.17g %.17g\n",
                mask.spec().h, mask.spec().box_lo.x, mask.spec().box_lo.y,
                mask.spec().box_hi.x, mask.spec().box_hi.y);
  os << "P2\n" << buf << mask.nx() << " " << mask.ny() << "\n255\n";
  for (int j = mask.ny() - 1; j >= 0; --j) {
    for (int i = 0; i < mask.nx(); ++i) {
      const std::int32_t idx = mask.index_of(i, j);
      int v = 0;
      if (idx >= 0)
        v = static_cast<int>(std::lround(std::max(0.0, u[static_cast<std::size_t>(idx)]) * scale));
      os << std::min(255, std::max(0, v));
      os << (i + 1 == mask.nx() ? '\n' : ' ');
    }
  }
  return os.str();
}

}  // namespace drumlab
