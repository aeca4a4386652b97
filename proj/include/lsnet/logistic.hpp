#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "lsnet/objective.hpp"
#include "lsnet/types.hpp"

namespace lsnet {

inline constexpr double kInnerRidge = 1e-6;

struct LogisticFit {
  double gamma = 0.0;
  Vector beta;
  bool fallback_used = false;  // Newton system was singular/non-finite
  int iterations = 0;
};

namespace detail {

inline double penalized_logistic_loss(const Matrix& Z, const Vector& y,
                                      double gamma, const Vector& beta,
                                      double ridge) {
  const Vector theta = (Z * beta).array() + gamma;
  double loss = 0.0;
  for (int i = 0; i < theta.size(); ++i)
    loss += log1pexp(theta(i)) - y(i) * theta(i);
  return loss + 0.5 * ridge * (gamma * gamma + beta.squaredNorm());
}

}  // namespace detail

// Ridge-penalized logistic regression of y on [1, Z] by Newton/IRLS with
// step halving. The tiny default ridge keeps separable and constant
// columns finite. Falls back to 50 plain gradient steps if the Newton
// system is unusable, and flags that it did.
inline LogisticFit inner_logistic_fit(const Matrix& Z, const Vector& y,
                                      double ridge = kInnerRidge,
                                      const Vector* init = nullptr) {
  const int n = static_cast<int>(Z.rows());
  const int k = static_cast<int>(Z.cols());
  const int p = k + 1;

  Vector w = Vector::Zero(p);  // [gamma, beta]
  if (init != nullptr && init->size() == p) w = *init;

  auto split_loss = [&](const Vector& coef) {
    return detail::penalized_logistic_loss(Z, y, coef(0), coef.tail(k), ridge);
  };

  LogisticFit fit;
  double loss = split_loss(w);
  for (int iter = 0; iter < 25; ++iter) {
    fit.iterations = iter + 1;
    const Vector theta = (Z * w.tail(k)).array() + w(0);
    Vector p_hat(n), weight(n);
    for (int i = 0; i < n; ++i) {
      p_hat(i) = sigmoid(theta(i));
      weight(i) = p_hat(i) * (1.0 - p_hat(i));
    }
    const Vector resid = p_hat - y;

    Vector grad(p);
    grad(0) = resid.sum() + ridge * w(0);
    grad.tail(k) = Z.transpose() * resid + ridge * w.tail(k);
    if (grad.norm() <= 1e-8) break;

    Matrix hess(p, p);
    hess(0, 0) = weight.sum();
    const Vector zw = Z.transpose() * weight;
    hess.block(0, 1, 1, k) = zw.transpose();
    hess.block(1, 0, k, 1) = zw;
    hess.block(1, 1, k, k) =
        Z.transpose() * weight.asDiagonal() * Z;
    hess += ridge * Matrix::Identity(p, p);

    Eigen::LDLT<Matrix> ldlt(hess);
    Vector step = ldlt.solve(grad);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      fit.fallback_used = true;
      const double lip = 0.25 * (Z.squaredNorm() + n) + ridge;
      for (int g = 0; g < 50; ++g) {
        const Vector th = (Z * w.tail(k)).array() + w(0);
        Vector r(n);
        for (int i = 0; i < n; ++i) r(i) = sigmoid(th(i)) - y(i);
        Vector gr(p);
        gr(0) = r.sum() + ridge * w(0);
        gr.tail(k) = Z.transpose() * r + ridge * w.tail(k);
        w -= gr / lip;
      }
      loss = split_loss(w);
      break;
    }

    // damped Newton: halve until the penalized loss does not increase
    double scale = 1.0;
    Vector cand = w - step;
    double cand_loss = split_loss(cand);
    for (int h = 0; h < 20 && (!std::isfinite(cand_loss) ||
                               cand_loss > loss + 1e-12); ++h) {
      scale *= 0.5;
      cand = w - scale * step;
      cand_loss = split_loss(cand);
    }
    w = cand;
    loss = cand_loss;
  }

  fit.gamma = w(0);
  fit.beta = w.tail(k);
  return fit;
}

}  // namespace lsnet
