#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "drumlab/grid.hpp"
#include "drumlab/heart.hpp"
#include "drumlab/placement.hpp"
#include "drumlab/spectral.hpp"

namespace drumlab {
namespace svg {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Five-stop approximation of a perceptually ordered palette.
inline std::string heat_color(double t) {
  static const double stops[5][3] = {{68, 1, 84},     {59, 82, 139},   {33, 145, 140},
                                     {94, 201, 98},   {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0);
  const double x = t * 4.0;
  const int k = std::min(3, static_cast<int>(x));
  const double f = x - k;
  char buf[32];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(stops[k][0] + f * (stops[k + 1][0] - stops[k][0])),
                static_cast<int>(stops[k][1] + f * (stops[k + 1][1] - stops[k][1])),
                static_cast<int>(stops[k][2] + f * (stops[k + 1][2] - stops[k][2])));
  return buf;
}

struct Mapper {
  double x0, y0, x1, y1, scale, pad, height;
  Mapper(double ax, double ay, double bx, double by, double width_px, double pad_px)
      : x0(ax), y0(ay), x1(bx), y1(by), pad(pad_px) {
    scale = (width_px - 2 * pad_px) / std::max(1e-12, x1 - x0);
    height = (y1 - y0) * scale + 2 * pad_px;
  }
  double px(double x) const { return pad + (x - x0) * scale; }
  double py(double y) const { return height - pad - (y - y0) * scale; }
};

inline void shape_outline(std::ostringstream& out, const Shape& s, const Mapper& m,
                          const Vec2& offset = {0, 0}) {
  std::vector<Vec2> pts;
  if (s.is_disc()) {
    for (int k = 0; k < 128; ++k) {
      const double a = 2.0 * constants::pi * k / 128;
      pts.push_back({s.disc_center().x + s.disc_radius() * std::cos(a),
                     s.disc_center().y + s.disc_radius() * std::sin(a)});
    }
  } else {
    pts = s.vertices();
  }
  out << "<polygon points=\"";
  for (const Vec2& p : pts)
    out << num(m.px(p.x + offset.x)) << "," << num(m.py(p.y + offset.y)) << " ";
  out << "\" fill=\"none\" stroke=\"#222\" stroke-width=\"1.5\"/>\n";
}

}  // namespace svg

inline std::string landscape_svg(const PlacementLandscape& L) {
  const double step = L.lattice_step;
  const double ax = L.kx_min * step - step / 2, bx = L.kx_max * step + step / 2;
  const double ay = L.ky_min * step - step / 2, by = L.ky_max * step + step / 2;
  const svg::Mapper m(std::min(ax, L.grid.box_lo.x), std::min(ay, L.grid.box_lo.y),
                      std::max(bx, L.grid.box_hi.x), std::max(by, L.grid.box_hi.y), 720, 16);

  double lo = 0, hi = 1;
  bool first = true;
  for (const PlacementEntry& e : L.entries) {
    if (!e.admissible) continue;
    if (first) {
      lo = hi = e.lambda1;
      first = false;
    }
    lo = std::min(lo, e.lambda1);
    hi = std::max(hi, e.lambda1);
  }
  const double span = (hi > lo) ? hi - lo : 1.0;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\""
      << svg::num(m.height) << "\" viewBox=\"0 0 720 " << svg::num(m.height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  const double cell = step * m.scale;
  for (const PlacementEntry& e : L.entries) {
    const std::string color =
        e.admissible ? svg::heat_color((e.lambda1 - lo) / span) : std::string("#e0e0e0");
    out << "<rect x=\"" << svg::num(m.px(e.offset.x) - cell / 2) << "\" y=\""
        << svg::num(m.py(e.offset.y) - cell / 2) << "\" width=\"" << svg::num(cell)
        << "\" height=\"" << svg::num(cell) << "\" fill=\"" << color << "\"/>\n";
  }
  svg::shape_outline(out, L.domain, m);
  for (const Vec2& am : L.argmax) {
    out << "<circle cx=\"" << svg::num(m.px(am.x)) << "\" cy=\"" << svg::num(m.py(am.y))
        << "\" r=\"5\" fill=\"none\" stroke=\"#fff\" stroke-width=\"2\"/>\n";
    svg::shape_outline(out, L.obstacle, m, am);
  }
  out << "</svg>\n";
  return out.str();
}

inline std::string heart_svg(const Shape& domain, const HeartResult& hr,
                             const std::vector<Vec2>& max_points) {
  const BBox bb = domain.bbox();
  const svg::Mapper m(bb.lo.x, bb.lo.y, bb.hi.x, bb.hi.y, 720, 16);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\""
      << svg::num(m.height) << "\" viewBox=\"0 0 720 " << svg::num(m.height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  svg::shape_outline(out, domain, m);
  if (hr.vertices.size() >= 3) {
    out << "<polygon points=\"";
    for (const Vec2& p : hr.vertices)
      out << svg::num(m.px(p.x)) << "," << svg::num(m.py(p.y)) << " ";
    out << "\" fill=\"#d8315b\" fill-opacity=\"0.35\" stroke=\"#d8315b\" "
           "stroke-width=\"1.5\"/>\n";
  } else {
    out << "<circle cx=\"" << svg::num(m.px(hr.point.x)) << "\" cy=\""
        << svg::num(m.py(hr.point.y))
        << "\" r=\"4\" fill=\"#d8315b\"/>\n";
  }
  for (const Vec2& p : max_points)
    out << "<circle cx=\"" << svg::num(m.px(p.x)) << "\" cy=\"" << svg::num(m.py(p.y))
        << "\" r=\"3\" fill=\"#1e3a8a\"/>\n";
  out << "</svg>\n";
  return out.str();
}

// Marching-squares contours of the ground state over the mask grid.
inline std::string contour_svg(const SpectralResult& r, int n_levels = 9) {
  const DomainMask& mask = *r.mask;
  const GridSpec& g = mask.spec();
  const svg::Mapper m(g.box_lo.x, g.box_lo.y, g.box_hi.x, g.box_hi.y, 720, 16);

  auto value = [&](int i, int j) -> double {
    const std::int32_t idx = mask.index_of(i, j);
    return idx < 0 ? 0.0 : r.phi[static_cast<std::size_t>(idx)];
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\""
      << svg::num(m.height) << "\" viewBox=\"0 0 720 " << svg::num(m.height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";

  const double cell = g.h * m.scale;
  for (std::size_t k = 0; k < mask.n_active(); ++k) {
    const Vec2 c = mask.point_of(k);
    out << "<rect x=\"" << svg::num(m.px(c.x) - cell / 2) << "\" y=\""
        << svg::num(m.py(c.y) - cell / 2) << "\" width=\"" << svg::num(cell + 0.5)
        << "\" height=\"" << svg::num(cell + 0.5) << "\" fill=\"#f2f2f2\"/>\n";
  }

  for (int lv = 1; lv <= n_levels; ++lv) {
    const double level = static_cast<double>(lv) / (n_levels + 1);
    const std::string color = svg::heat_color(level);
    out << "<path d=\"";
    for (int j = 0; j + 1 < g.ny(); ++j) {
      for (int i = 0; i + 1 < g.nx(); ++i) {
        // corner values at the four surrounding cell centers
        const double v00 = value(i, j), v10 = value(i + 1, j);
        const double v01 = value(i, j + 1), v11 = value(i + 1, j + 1);
        const Vec2 p00 = g.cell_center(i, j), p10 = g.cell_center(i + 1, j);
        const Vec2 p01 = g.cell_center(i, j + 1), p11 = g.cell_center(i + 1, j + 1);
        auto lerp = [&](const Vec2& a, double va, const Vec2& b, double vb) -> Vec2 {
          const double t = (level - va) / (vb - va);
          return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
        };
        std::vector<Vec2> hits;
        if ((v00 < level) != (v10 < level)) hits.push_back(lerp(p00, v00, p10, v10));
        if ((v10 < level) != (v11 < level)) hits.push_back(lerp(p10, v10, p11, v11));
        if ((v01 < level) != (v11 < level)) hits.push_back(lerp(p01, v01, p11, v11));
        if ((v00 < level) != (v01 < level)) hits.push_back(lerp(p00, v00, p01, v01));
        if (hits.size() == 2) {
          out << "M" << svg::num(m.px(hits[0].x)) << " " << svg::num(m.py(hits[0].y)) << "L"
              << svg::num(m.px(hits[1].x)) << " " << svg::num(m.py(hits[1].y));
        } else if (hits.size() == 4) {
          out << "M" << svg::num(m.px(hits[0].x)) << " " << svg::num(m.py(hits[0].y)) << "L"
              << svg::num(m.px(hits[1].x)) << " " << svg::num(m.py(hits[1].y));
          out << "M" << svg::num(m.px(hits[2].x)) << " " << svg::num(m.py(hits[2].y)) << "L"
              << svg::num(m.px(hits[3].x)) << " " << svg::num(m.py(hits[3].y));
        }
      }
    }
    out << "\" stroke=\"" << color << "\" stroke-width=\"1.2\" fill=\"none\"/>\n";
  }

  // mark the peak
  std::size_t best = 0;
  for (std::size_t k = 1; k < r.phi.size(); ++k)
    if (r.phi[k] > r.phi[best]) best = k;
  const Vec2 pk = mask.point_of(best);
  out << "<circle cx=\"" << svg::num(m.px(pk.x)) << "\" cy=\"" << svg::num(m.py(pk.y))
      << "\" r=\"4\" fill=\"#c1121f\"/>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace drumlab
