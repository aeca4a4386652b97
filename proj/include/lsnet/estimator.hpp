#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "lsnet/logistic.hpp"
#include "lsnet/objective.hpp"
#include "lsnet/optimizer.hpp"
#include "lsnet/projection.hpp"
#include "lsnet/rng.hpp"
#include "lsnet/types.hpp"

namespace lsnet {

struct FitResult {
  LatentState state;  // best iterate, covariance-diagonalized
  std::vector<LossBreakdown> trace;
  int iterations_run = 0;
  bool stopped_early = false;
  int best_iteration = 0;  // 1-based index into trace
  bool rotation_degenerate = false;
};

using ProgressFn = std::function<void(int, const LossBreakdown&)>;

// Uninformative start: Z ~ N(0,1) column-centered, alpha ~ Uniform(-1,1)
// centered, (beta, gamma) from per-column ridge logistic fits of Y on Z.
inline LatentState initialize(const Network& net, const CovariateMatrix& cov,
                              int k, std::uint64_t seed) {
  const int n = net.n();
  const int q = cov.q();
  Rng rng(seed);

  LatentState s(n, k, q);
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < k; ++d) s.Z(i, d) = rng.normal();
  s.Z = center_columns(s.Z);
  for (int i = 0; i < n; ++i) s.alpha(i) = rng.uniform(-1.0, 1.0);
  s.alpha = center_vector(s.alpha);

  for (int j = 0; j < q; ++j) {
    const LogisticFit f = inner_logistic_fit(s.Z, cov.values.col(j));
    s.gamma(j) = f.gamma;
    s.beta.col(j) = f.beta;
  }
  return s;
}

// The joint fitting loop: annealed ADAM/Adagrad steps on (Z, alpha) with
// centering projections after every step, a full logistic refit of each
// covariate column per iteration (warm-started), early stopping on the
// mean log losses, best-iterate tracking by per-parameter loss, and a
// final covariance diagonalization of the returned state.
//
// With lambda_weight = 0 the covariates cannot move (Z, alpha), so early
// stopping then watches the network loss alone; this keeps the trajectory
// independent of Y as the weight says it should be.
inline FitResult fit_joint(const Network& net, const CovariateMatrix& cov,
                           const Hyperparams& hyper,
                           const LatentState* init = nullptr,
                           const ProgressFn& progress = {},
                           int latent_dim = 2) {
  validate_pair(net, cov);
  validate(hyper);

  const int n = net.n();
  const int q = cov.q();
  LatentState state =
      init != nullptr ? *init : initialize(net, cov, latent_dim, hyper.seed);
  state.Z = center_columns(state.Z);
  state.alpha = center_vector(state.alpha);
  const int k = state.k();

  OptimizerState opt(hyper.optimizer_kind, n, k);
  const int T = hyper.max_iters;
  const double pairs = 0.5 * n * (n - 1.0);
  const bool watch_Y = hyper.lambda_weight > 0.0 && q > 0;

  // warm-start store for the inner fits: [gamma_j, beta_.j] per column
  std::vector<Vector> coef(q);
  for (int j = 0; j < q; ++j) {
    coef[j] = Vector(k + 1);
    coef[j](0) = state.gamma(j);
    coef[j].tail(k) = state.beta.col(j);
  }

  FitResult result;
  result.trace.reserve(T);
  LatentState best_state = state;
  double best_per_param = std::numeric_limits<double>::infinity();
  double prev_mean_A = std::numeric_limits<double>::quiet_NaN();
  double prev_mean_Y = std::numeric_limits<double>::quiet_NaN();
  int stable = 0;

  for (int t = 1; t <= T; ++t) {
    const double eta_t = cosine_anneal(hyper.eta0, t - 1, T);
    const StepSizes sizes = step_sizes(eta_t, state.Z, n);
    const Gradients g = gradients(net, cov, state, hyper.lambda_weight);
    apply_step(state, g, opt, sizes);
    state.Z = center_columns(state.Z);
    state.alpha = center_vector(state.alpha);

    for (int j = 0; j < q; ++j) {
      const LogisticFit f =
          inner_logistic_fit(state.Z, cov.values.col(j), kInnerRidge, &coef[j]);
      coef[j](0) = f.gamma;
      coef[j].tail(k) = f.beta;
      state.gamma(j) = f.gamma;
      state.beta.col(j) = f.beta;
    }

    const LossBreakdown lb = joint_loss(net, cov, state, hyper.lambda_weight);
    if (!std::isfinite(lb.joint))
      throw NonFiniteLoss("joint loss diverged at iteration " +
                          std::to_string(t));
    result.trace.push_back(lb);
    result.iterations_run = t;
    if (progress) progress(t, lb);

    if (lb.per_param < best_per_param) {
      best_per_param = lb.per_param;
      best_state = state;
      result.best_iteration = t;
    }

    const double mean_A = lb.loss_A / pairs;
    const double mean_Y = q > 0 ? lb.loss_Y / (double(n) * q) : 0.0;
    if (t > 1) {
      const bool flat_A = std::abs(mean_A - prev_mean_A) <= hyper.stop_tol;
      const bool flat_Y =
          !watch_Y || std::abs(mean_Y - prev_mean_Y) <= hyper.stop_tol;
      stable = (flat_A && flat_Y) ? stable + 1 : 0;
      if (stable >= hyper.stop_patience) {
        result.stopped_early = true;
        break;
      }
    }
    prev_mean_A = mean_A;
    prev_mean_Y = mean_Y;
  }

  DiagonalizeResult rot = diagonalize_covariance(best_state.Z, best_state.beta);
  best_state.Z = std::move(rot.Z);
  best_state.beta = std::move(rot.beta);
  result.rotation_degenerate = rot.degenerate;
  result.state = std::move(best_state);
  return result;
}

}  // namespace lsnet
