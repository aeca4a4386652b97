#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "lsnet/errors.hpp"
#include "lsnet/types.hpp"

namespace lsnet {

// log(1 + exp(x)) without overflow for |x| up to ~700
inline double log1pexp(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// theta^A_{ii'} = alpha_i + alpha_{i'} + Z_i . Z_{i'}. Symmetric; the
// diagonal comes out as 2 alpha_i + |Z_i|^2 but is excluded from every
// loss and gradient.
inline Matrix edge_logits(const LatentState& s) {
  Matrix theta = s.Z * s.Z.transpose();
  theta.rowwise() += s.alpha.transpose();
  theta.colwise() += s.alpha;
  return theta;
}

// theta^Y_{ij} = gamma_j + Z_i . beta_{.j}
inline Matrix covariate_logits(const LatentState& s) {
  Matrix theta = s.Z * s.beta;
  theta.rowwise() += s.gamma.transpose();
  return theta;
}

inline Matrix elementwise_log1pexp(const Matrix& theta) {
  const auto t = theta.array();
  return t.max(0.0) + (-t.abs()).exp().log1p();
}

inline Matrix elementwise_sigmoid(const Matrix& theta) {
  // exp(-|t|) is finite everywhere; both branches reuse it
  const auto t = theta.array();
  const auto e = (-t.abs()).exp();
  return (t >= 0.0).select(1.0 / (1.0 + e), e / (1.0 + e));
}

// Negative Bernoulli log-likelihood of the network over unordered pairs
// i < i'; the diagonal never contributes.
inline double loss_network(const Network& net, const LatentState& s) {
  Matrix theta = edge_logits(s);
  Matrix cell = elementwise_log1pexp(theta) -
                net.adjacency.cwiseProduct(theta);
  cell.diagonal().setZero();
  return 0.5 * cell.sum();
}

// Negative Bernoulli log-likelihood of the covariates, optionally over a
// subset of columns. subset = nullptr means all columns.
inline double loss_covariates(const CovariateMatrix& cov, const LatentState& s,
                              const ActiveSet* subset = nullptr) {
  const Matrix theta = covariate_logits(s);
  const Matrix cell =
      elementwise_log1pexp(theta) - cov.values.cwiseProduct(theta);
  if (subset == nullptr) return cell.sum();
  double total = 0.0;
  for (int j : subset->indices) total += cell.col(j).sum();
  return total;
}

struct LossBreakdown {
  double loss_A = 0.0;
  double loss_Y = 0.0;
  double joint = 0.0;
  // (1/(n(n-1))) logloss(A) + Lambda (1/(nq)) logloss(Y); the quantity
  // used to pick the best iterate
  double per_param = 0.0;
};

inline LossBreakdown joint_loss(const Network& net, const CovariateMatrix& cov,
                                const LatentState& s, double lambda_weight) {
  LossBreakdown lb;
  lb.loss_A = loss_network(net, s);
  lb.loss_Y = loss_covariates(cov, s);
  lb.joint = lb.loss_A + lambda_weight * lb.loss_Y;
  const double n = static_cast<double>(net.n());
  const double q = static_cast<double>(cov.q());
  lb.per_param = lb.loss_A / (n * (n - 1.0));
  if (q > 0.0) lb.per_param += lambda_weight * lb.loss_Y / (n * q);
  return lb;
}

struct Gradients {
  Matrix dZ;      // gradient of the joint loss
  Vector dAlpha;  // gradient of the joint loss
  Matrix dBeta;   // gradient of loss_Y alone (the inner fits own beta/gamma)
  Vector dGamma;
};

inline Gradients gradients(const Network& net, const CovariateMatrix& cov,
                           const LatentState& s, double lambda_weight) {
  Matrix residual_A = elementwise_sigmoid(edge_logits(s)) - net.adjacency;
  residual_A.diagonal().setZero();

  Gradients g;
  g.dZ = residual_A * s.Z;
  g.dAlpha = residual_A.rowwise().sum();

  const Matrix residual_Y =
      elementwise_sigmoid(covariate_logits(s)) - cov.values;
  if (cov.q() > 0) {
    g.dZ += lambda_weight * (residual_Y * s.beta.transpose());
    g.dBeta = s.Z.transpose() * residual_Y;
    g.dGamma = residual_Y.colwise().sum();
  } else {
    g.dBeta = Matrix::Zero(s.k(), 0);
    g.dGamma = Vector::Zero(0);
  }
  return g;
}

}  // namespace lsnet
