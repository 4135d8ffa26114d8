#pragma once

#include <stdexcept>
#include <string>

namespace drumlab {

namespace constants {
// first zero of J0 and the unit-disc ground eigenvalue
inline constexpr double j01 = 2.404825557695773;
inline constexpr double j01_sq = j01 * j01;  // 5.783185962946785
inline constexpr double pi = 3.141592653589793;
}  // namespace constants

enum class Provenance { Analytic, Calibrated };

inline const char* provenance_name(Provenance p) {
  return p == Provenance::Analytic ? "analytic" : "calibrated";
}

// Dimensionless constants of the eigenvalue bounds. c0 is the ground
// eigenvalue of the unit ball (exact in 2D); r0 scales the inscribed
// wavelength ball at the max point; beta0 = c0 / r0^2 keeps the two branches
// of beta continuous; C0 is the containment threshold; C1 <= inrad * sqrt(lambda1)
// <= C2 brackets the inradius.
struct ConstantsProfile {
  int n = 2;
  double c0 = 0.0;
  double r0 = 0.0;
  double beta0 = 0.0;
  double C0 = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double omega_n = 0.0;
  Provenance c0_prov = Provenance::Analytic;
  Provenance r0_prov = Provenance::Calibrated;
  Provenance beta0_prov = Provenance::Calibrated;
  Provenance C0_prov = Provenance::Calibrated;
  Provenance C1_prov = Provenance::Calibrated;
  Provenance C2_prov = Provenance::Analytic;
  Provenance omega_n_prov = Provenance::Analytic;

  void validate() const {
    if (n != 2) throw std::invalid_argument("constants profile: solver supports n = 2 only");
    if (!(c0 > 0 && r0 > 0 && beta0 > 0 && C0 > 0 && C1 > 0 && C2 > 0 && omega_n > 0))
      throw std::invalid_argument("constants profile: all constants must be positive");
  }

  // Default 2D profile. c0, C2, omega_n are closed-form; r0, C1, C0 carry the
  // conservative values from the shipped calibration family (see calibrate).
  static ConstantsProfile analytic_2d() {
    ConstantsProfile p;
    p.n = 2;
    p.c0 = constants::j01_sq;
    p.r0 = 1.5;
    p.beta0 = p.c0 / (p.r0 * p.r0);
    p.C0 = 4.0;
    p.C1 = 1.5;
    p.C2 = constants::j01;
    p.omega_n = constants::pi;
    p.validate();
    return p;
  }
};

}  // namespace drumlab
