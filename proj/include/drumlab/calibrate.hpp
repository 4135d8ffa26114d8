#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "drumlab/constants.hpp"
#include "drumlab/shape.hpp"
#include "drumlab/solve.hpp"
#include "drumlab/spectral.hpp"

namespace drumlab {

struct CalibrationEntry {
  std::string name;
  double lambda1 = 0.0;           // extrapolated
  Vec2 max_point{0, 0};
  double max_point_clearance = 0.0;
  double inradius = 0.0;
  double scaled_clearance = 0.0;  // clearance * sqrt(lambda1)
  double scaled_inradius = 0.0;   // inradius  * sqrt(lambda1)
};

struct CalibrationResult {
  ConstantsProfile profile;
  std::vector<CalibrationEntry> entries;
  double h = 0.0;
  double tol = 0.0;
};

// Fits the non-analytic profile constants to a family of convex shapes.
// c0 and omega_n stay analytic; C0 keeps the default containment threshold
// (it is fitted against sweep outcomes, not single solves).
inline CalibrationResult calibrate(const std::vector<std::pair<std::string, Shape>>& family,
                                   double h, double tol) {
  if (family.size() < 5)
    throw std::invalid_argument("calibration family must contain at least 5 shapes");
  for (const auto& [name, s] : family)
    if (!s.is_convex())
      throw std::invalid_argument("calibration family must be convex: '" + name + "'");

  CalibrationResult out;
  out.h = h;
  out.tol = tol;
  double r0 = 0.0, c1 = 0.0, c2 = 0.0;
  bool first = true;
  for (const auto& [name, s] : family) {
    const LevelPair lp = solve_extrapolated(s, std::nullopt, h, tol);
    const MaxSet M = max_set(lp.fine);
    CalibrationEntry e;
    e.name = name;
    e.lambda1 = lp.lambda_extrap;
    e.max_point = M.first();
    e.max_point_clearance = s.interior_clearance(e.max_point);
    e.inradius = inradius(s, h).first;
    const double sq = std::sqrt(e.lambda1);
    e.scaled_clearance = e.max_point_clearance * sq;
    e.scaled_inradius = e.inradius * sq;
    if (first) {
      r0 = e.scaled_clearance;
      c1 = c2 = e.scaled_inradius;
      first = false;
    } else {
      r0 = std::min(r0, e.scaled_clearance);
      c1 = std::min(c1, e.scaled_inradius);
      c2 = std::max(c2, e.scaled_inradius);
    }
    out.entries.push_back(e);
  }

  ConstantsProfile p = ConstantsProfile::analytic_2d();
  p.r0 = r0;
  p.r0_prov = Provenance::Calibrated;
  p.beta0 = p.c0 / (r0 * r0);
  p.beta0_prov = Provenance::Calibrated;
  p.C1 = c1;
  p.C1_prov = Provenance::Calibrated;
  p.C2 = c2;
  p.C2_prov = Provenance::Calibrated;
  p.validate();
  out.profile = p;
  return out;
}

}  // namespace drumlab
