#pragma once

#include <Eigen/Dense>

#include "lsnet/types.hpp"

namespace lsnet {

// J*Z with J = I - (1/n) 11^T: removes the per-dimension mean across nodes.
inline Matrix center_columns(const Matrix& Z) {
  return Z.rowwise() - Z.colwise().mean();
}

inline Vector center_vector(const Vector& v) {
  return v.array() - v.mean();
}

struct DiagonalizeResult {
  Matrix Z;         // Z * Q
  Matrix beta;      // Q^T * beta
  Matrix rotation;  // orthogonal Q, k x k
  bool degenerate = false;
};

// Rotates (Z, beta) so that (1/n) Z^T Z is diagonal with nonincreasing
// entries. Eigenvector signs are fixed by making the largest-magnitude
// entry of each column positive (ties broken by lowest row index), so the
// output is deterministic. Z*beta and Z*Z^T are invariant. If Z^T Z is
// rank-deficient the rotation is still produced and `degenerate` is set.
inline DiagonalizeResult diagonalize_covariance(const Matrix& Z,
                                                const Matrix& beta) {
  const int k = static_cast<int>(Z.cols());
  const double n = static_cast<double>(Z.rows());
  const Matrix S = (Z.transpose() * Z) / n;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(S);
  // Eigen returns ascending eigenvalues; we want nonincreasing.
  Matrix Q(k, k);
  for (int c = 0; c < k; ++c) Q.col(c) = eig.eigenvectors().col(k - 1 - c);

  for (int c = 0; c < k; ++c) {
    int arg = 0;
    for (int r = 1; r < k; ++r)
      if (std::abs(Q(r, c)) > std::abs(Q(arg, c))) arg = r;
    if (Q(arg, c) < 0.0) Q.col(c) = -Q.col(c);
  }

  DiagonalizeResult out;
  out.rotation = Q;
  out.Z = Z * Q;
  out.beta = Q.transpose() * beta;
  const double top = eig.eigenvalues()(k - 1);
  const double bottom = eig.eigenvalues()(0);
  out.degenerate = bottom <= 1e-12 * std::max(1.0, top);
  return out;
}

}  // namespace lsnet
