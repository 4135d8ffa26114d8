#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "drumlab/grid.hpp"

namespace drumlab {

// Ground state of the stencil operator. phi is indexed by the mask's active
// cells, is normalized to sup-norm 1, and is strictly positive on the
// component that attains lambda1 (on all cells when the mask is connected).
struct SpectralResult {
  double lambda1 = 0.0;
  std::vector<double> phi;
  double residual = 0.0;  // ||L phi - lambda1 phi||_2 / ||phi||_2
  int iterations = 0;
  std::shared_ptr<const DomainMask> mask;
  bool disconnected = false;
  int n_components = 1;
};

class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, SpectralResult best)
      : std::runtime_error(what), best_iterate(std::move(best)) {}
  SpectralResult best_iterate;
};

namespace detail {

// Conjugate gradients for (L - sigma I) x = b, warm-started from x.
// Returns true when the relative residual reached rtol.
inline bool cg_solve(const StencilOperator& op, double sigma, const std::vector<double>& b,
                     std::vector<double>& x, double rtol, int max_cg, int* iters_out) {
  const std::size_t n = b.size();
  x.resize(n, 0.0);
  std::vector<double> r(n), p(n), Ap(n);
  op.apply(x, Ap);
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - (Ap[k] - sigma * x[k]);
  const double bnorm = norm2_field(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    if (iters_out) *iters_out = 0;
    return true;
  }
  double rs = dot(r, r);
  if (std::sqrt(rs) <= rtol * bnorm) {
    if (iters_out) *iters_out = 0;
    return true;
  }
  p = r;
  int it = 0;
  for (; it < max_cg; ++it) {
    op.apply(p, Ap);
    if (sigma != 0.0)
      for (std::size_t k = 0; k < n; ++k) Ap[k] -= sigma * p[k];
    const double pAp = dot(p, Ap);
    if (!(pAp > 0.0)) throw std::runtime_error("CG breakdown: operator not positive definite");
    const double alpha = rs / pAp;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * Ap[k];
    }
    const double rs_new = dot(r, r);
    if (std::sqrt(rs_new) <= rtol * bnorm) {
      if (iters_out) *iters_out = it + 1;
      return true;
    }
    const double beta = rs_new / rs;
    rs = rs_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
  }
  if (iters_out) *iters_out = it;
  return false;
}

// Inverse power iteration on a connected mask.
inline SpectralResult solve_connected(const StencilOperator& op,
                                      std::shared_ptr<const DomainMask> mask, double tol,
                                      int max_iter) {
  const std::size_t n = op.size();
  SpectralResult res;
  res.mask = std::move(mask);
  std::vector<double> phi(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> w(n, 0.0), Lphi(n);

  op.apply(phi, Lphi);
  double lambda = dot(Lphi, phi);
  const int max_cg = 20000;
  const double rtol = tol / 10.0;
  bool restarted = false;

  for (int it = 1; it <= max_iter; ++it) {
    bool ok = cg_solve(op, 0.0, phi, w, rtol, max_cg, nullptr);
    if (!ok && !restarted) {
      // one shifted restart: shift just below the current Rayleigh quotient
      restarted = true;
      std::fill(w.begin(), w.end(), 0.0);
      ok = cg_solve(op, 0.9 * lambda, phi, w, rtol, max_cg, nullptr);
    }
    if (!ok) {
      res.lambda1 = lambda;
      res.phi = phi;
      res.iterations = it;
      throw SolveError("inner CG solve stagnated", res);
    }
    const double wn = norm2_field(w);
    if (!(wn > 0.0)) throw std::runtime_error("CG breakdown: zero iterate");
    for (std::size_t k = 0; k < n; ++k) phi[k] = w[k] / wn;
    op.apply(phi, Lphi);
    const double lambda_new = dot(Lphi, phi);
    double rr = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = Lphi[k] - lambda_new * phi[k];
      rr += d * d;
    }
    const double resid = std::sqrt(rr);  // phi has unit 2-norm, so no division
    const bool settled = std::abs(lambda_new - lambda) <= tol * std::abs(lambda_new);
    lambda = lambda_new;
    // the residual criterion is the binding one; the Rayleigh-quotient change
    // settles several iterations earlier
    if (settled && resid <= tol * std::abs(lambda)) {
      res.lambda1 = lambda;
      res.residual = resid;  // scale-invariant, survives the renormalization
      res.iterations = it;
      double mean = 0.0;
      for (double v : phi) mean += v;
      if (mean < 0)
        for (double& v : phi) v = -v;
      const double m = max_abs(phi);
      for (double& v : phi) v /= m;
      res.phi = std::move(phi);
      return res;
    }
  }
  res.lambda1 = lambda;
  res.phi = phi;
  res.iterations = max_iter;
  throw SolveError("eigensolver exceeded max_iter", res);
}

}  // namespace detail

// Smallest eigenpair by inverse power iteration with CG inner solves.
// Disconnected masks are solved per component; the result is the minimum
// eigenvalue with phi supported on the attaining component, flagged.
inline SpectralResult solve_mask(std::shared_ptr<const DomainMask> mask, double tol,
                                 int max_iter = 500) {
  if (!mask || mask->n_active() == 0) throw std::invalid_argument("empty mask");
  if (!(tol > 0.0 && tol <= 1e-4))
    throw std::invalid_argument("solver tol must lie in (0, 1e-4]");
  int n_comp = 0;
  const std::vector<std::int32_t> labels = mask->component_labels(&n_comp);
  if (n_comp <= 1) {
    StencilOperator op(*mask);
    return detail::solve_connected(op, mask, tol, max_iter);
  }
  SpectralResult best;
  best.lambda1 = std::numeric_limits<double>::max();
  int total_iters = 0;
  for (std::int32_t c = 0; c < n_comp; ++c) {
    auto sub = std::make_shared<const DomainMask>(mask->component(labels, c));
    StencilOperator op(*sub);
    SpectralResult r = detail::solve_connected(op, sub, tol, max_iter);
    total_iters += r.iterations;
    if (r.lambda1 < best.lambda1) best = std::move(r);
  }
  // re-index the winning component's phi onto the full mask
  std::vector<double> phi(mask->n_active(), 0.0);
  for (std::size_t k = 0; k < best.mask->n_active(); ++k) {
    const auto [i, j] = best.mask->cell_of(k);
    phi[static_cast<std::size_t>(mask->index_of(i, j))] = best.phi[k];
  }
  best.phi = std::move(phi);
  best.mask = std::move(mask);
  best.disconnected = true;
  best.n_components = n_comp;
  best.iterations = total_iters;
  return best;
}

// Spec-shaped entry point; copies the operator's mask into the result.
inline SpectralResult smallest_eigenpair(const StencilOperator& op, double tol,
                                         int max_iter = 500) {
  return solve_mask(std::make_shared<const DomainMask>(op.mask()), tol, max_iter);
}

struct Extrapolation {
  double lambda_extrap = 0.0;
  double order = std::numeric_limits<double>::quiet_NaN();
};

// Richardson step assuming first-order boundary error.
inline Extrapolation refine_extrapolate(double lambda_h, double lambda_h2) {
  Extrapolation e;
  e.lambda_extrap = 2.0 * lambda_h2 - lambda_h;
  return e;
}

// Three-level variant: order estimated from successive differences.
inline Extrapolation refine_extrapolate(double lambda_h, double lambda_h2,
                                        double lambda_h4) {
  Extrapolation e;
  e.lambda_extrap = 2.0 * lambda_h4 - lambda_h2;
  const double d1 = lambda_h - lambda_h2;
  const double d2 = lambda_h2 - lambda_h4;
  if (d1 * d2 > 0.0) e.order = std::log2(d1 / d2);
  return e;
}

}  // namespace drumlab
