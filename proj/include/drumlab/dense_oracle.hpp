#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "drumlab/grid.hpp"

namespace drumlab {

struct DenseSpectrum {
  std::vector<double> eigenvalues;   // ascending
  std::vector<double> ground_state;  // sign-fixed, sup-norm 1
};

// Assembles the full stencil matrix and diagonalizes it. Intended as a test
// oracle for small masks only.
inline DenseSpectrum dense_oracle(const StencilOperator& op) {
  const std::size_t n = op.size();
  if (n > 2000) throw std::invalid_argument("dense oracle limited to 2000 active cells");
  if (n == 0) throw std::invalid_argument("empty mask");
  const DomainMask& mask = op.mask();
  const double inv_h2 = 1.0 / (mask.spec().h * mask.spec().h);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const auto [i, j] = mask.cell_of(k);
    A(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 4.0 * inv_h2;
    const int di[4] = {1, -1, 0, 0};
    const int dj[4] = {0, 0, 1, -1};
    for (int q = 0; q < 4; ++q) {
      const std::int32_t nb = mask.index_of(i + di[q], j + dj[q]);
      if (nb >= 0)
        A(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(nb)) = -inv_h2;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolve failed");
  DenseSpectrum out;
  out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  Eigen::VectorXd v = es.eigenvectors().col(0);
  if (v.sum() < 0) v = -v;
  const double m = v.cwiseAbs().maxCoeff();
  if (m > 0) v /= m;
  out.ground_state.assign(v.data(), v.data() + n);
  return out;
}

}  // namespace drumlab
