#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "lsnet/logistic.hpp"
#include "lsnet/objective.hpp"
#include "lsnet/types.hpp"

namespace lsnet {

// Proximal operator of threshold*|x|_2 + (ridge_scale/2)*|x|_2^2:
// group soft-threshold, then shrink by 1/(1 + ridge_scale).
inline Vector prox_group(const Vector& v, double threshold,
                         double ridge_scale) {
  const double norm = v.norm();
  if (norm <= threshold) return Vector::Zero(v.size());
  return v * ((1.0 - threshold / norm) / (1.0 + ridge_scale));
}

struct GroupLassoFit {
  double gamma = 0.0;
  Vector beta;
  bool converged = false;
  int iterations = 0;
};

// Penalized objective for one covariate column:
//   (1/n) sum_i [log(1+exp(theta_i)) - y_i theta_i]
//     + lambda sqrt(k) |beta|_2 + (delta sqrt(k)/2) |beta|_2^2
inline double group_lasso_objective(const Matrix& Z, const Vector& y,
                                    double gamma, const Vector& beta,
                                    double lambda, double delta) {
  const int n = static_cast<int>(Z.rows());
  const double sk = std::sqrt(static_cast<double>(Z.cols()));
  const Vector theta = (Z * beta).array() + gamma;
  double smooth = 0.0;
  for (int i = 0; i < n; ++i) smooth += log1pexp(theta(i)) - y(i) * theta(i);
  const double bnorm = beta.norm();
  return smooth / n + lambda * sk * bnorm + 0.5 * delta * sk * bnorm * bnorm;
}

// Proximal gradient with backtracking on the smooth part. The intercept is
// unpenalized. Stops when the iterate change drops below 1e-9 (max norm)
// or after 5000 iterations, in which case `converged` stays false and the
// last iterate is returned.
inline GroupLassoFit group_lasso_column(const Matrix& Z, const Vector& y,
                                        double lambda, double delta,
                                        const Vector* init = nullptr) {
  const int n = static_cast<int>(Z.rows());
  const int k = static_cast<int>(Z.cols());
  const double sk = std::sqrt(static_cast<double>(k));

  Vector w = Vector::Zero(k + 1);  // [gamma, beta]
  if (init != nullptr && init->size() == k + 1) w = *init;

  auto smooth = [&](const Vector& coef) {
    const Vector theta = (Z * coef.tail(k)).array() + coef(0);
    double f = 0.0;
    for (int i = 0; i < n; ++i) f += log1pexp(theta(i)) - y(i) * theta(i);
    return f / n;
  };
  auto smooth_grad = [&](const Vector& coef) {
    const Vector theta = (Z * coef.tail(k)).array() + coef(0);
    Vector r(n);
    for (int i = 0; i < n; ++i) r(i) = sigmoid(theta(i)) - y(i);
    Vector grad(k + 1);
    grad(0) = r.sum() / n;
    grad.tail(k) = Z.transpose() * r / n;
    return grad;
  };

  GroupLassoFit fit;
  double step = 4.0 * n / (Z.squaredNorm() + n);  // 1 / (|X|_F^2 / (4n))
  double f = smooth(w);
  for (int it = 0; it < 5000; ++it) {
    fit.iterations = it + 1;
    const Vector grad = smooth_grad(w);
    Vector next(k + 1);
    while (true) {
      const Vector v = w - step * grad;
      next(0) = v(0);
      next.tail(k) = prox_group(v.tail(k), step * lambda * sk,
                                step * delta * sk);
      const Vector d = next - w;
      const double fn = smooth(next);
      if (fn <= f + grad.dot(d) + d.squaredNorm() / (2.0 * step) + 1e-12) {
        f = fn;
        break;
      }
      step *= 0.5;
    }
    const double change = (next - w).cwiseAbs().maxCoeff();
    w = next;
    if (change < 1e-9) {
      fit.converged = true;
      break;
    }
    step *= 1.1;
  }

  fit.gamma = w(0);
  fit.beta = w.tail(k);
  return fit;
}

// 20 log-linear points spanning [0.01 sqrt(k/n), 10 sqrt(k/n)] with the
// sqrt(k/n) anchor inserted exactly; ascending.
inline std::vector<double> default_lambda_grid(int k, int n) {
  const double anchor = std::sqrt(static_cast<double>(k) / n);
  const double lo = std::log(0.01 * anchor);
  const double hi = std::log(10.0 * anchor);
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i)
    grid.push_back(std::exp(lo + (hi - lo) * i / 19.0));
  grid.push_back(anchor);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

// {0, 0.05, ..., 0.5}
inline std::vector<double> default_delta_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.05 * i);
  return grid;
}

}  // namespace lsnet
