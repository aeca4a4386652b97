#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "lsnet/objective.hpp"
#include "lsnet/types.hpp"

namespace lsnet {

// First-order optimizer state for the (Z, alpha) block. beta and gamma are
// never touched here; they are refit by inner logistic regressions.
struct OptimizerState {
  OptimizerKind kind = OptimizerKind::adam;
  int step_count = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // ADAM: first/second moments. Adagrad: vZ/vAlpha hold the squared-gradient
  // accumulators and the first moments stay unused.
  Matrix mZ, vZ;
  Vector mAlpha, vAlpha;

  OptimizerState(OptimizerKind kind_, int n, int k)
      : kind(kind_),
        mZ(Matrix::Zero(n, k)),
        vZ(Matrix::Zero(n, k)),
        mAlpha(Vector::Zero(n)),
        vAlpha(Vector::Zero(n)) {}
};

// eta_min + (eta0 - eta_min)/2 * (1 + cos(pi t / T)) with eta_min = 0
inline double cosine_anneal(double eta0, int t, int T) {
  return 0.5 * eta0 * (1.0 + std::cos(std::numbers::pi * t / T));
}

struct StepSizes {
  double eta_t = 0.0;
  double eta_Z = 0.0;
  double eta_alpha = 0.0;
};

// eta_Z = eta_t / |Z|_F^2 and eta_alpha = eta_t / (2n); eta_Z falls back to
// eta_t when |Z|_F^2 is numerically zero.
inline StepSizes step_sizes(double eta_t, const Matrix& Z, int n) {
  StepSizes s;
  s.eta_t = eta_t;
  const double zsq = Z.squaredNorm();
  s.eta_Z = zsq < 1e-12 ? eta_t : eta_t / zsq;
  s.eta_alpha = eta_t / (2.0 * n);
  return s;
}

// One optimizer step on (Z, alpha); deterministic in all inputs.
inline void apply_step(LatentState& state, const Gradients& g,
                       OptimizerState& opt, const StepSizes& sizes) {
  opt.step_count += 1;
  if (opt.kind == OptimizerKind::adam) {
    const double c1 = 1.0 - std::pow(opt.beta1, opt.step_count);
    const double c2 = 1.0 - std::pow(opt.beta2, opt.step_count);
    opt.mZ = opt.beta1 * opt.mZ + (1.0 - opt.beta1) * g.dZ;
    opt.vZ = opt.beta2 * opt.vZ + (1.0 - opt.beta2) * g.dZ.cwiseProduct(g.dZ);
    opt.mAlpha = opt.beta1 * opt.mAlpha + (1.0 - opt.beta1) * g.dAlpha;
    opt.vAlpha = opt.beta2 * opt.vAlpha +
                 (1.0 - opt.beta2) * g.dAlpha.cwiseProduct(g.dAlpha);
    state.Z.array() -= sizes.eta_Z * (opt.mZ.array() / c1) /
                       ((opt.vZ.array() / c2).sqrt() + opt.epsilon);
    state.alpha.array() -= sizes.eta_alpha * (opt.mAlpha.array() / c1) /
                           ((opt.vAlpha.array() / c2).sqrt() + opt.epsilon);
  } else {
    opt.vZ += g.dZ.cwiseProduct(g.dZ);
    opt.vAlpha += g.dAlpha.cwiseProduct(g.dAlpha);
    state.Z.array() -=
        sizes.eta_Z * g.dZ.array() / (opt.vZ.array().sqrt() + opt.epsilon);
    state.alpha.array() -= sizes.eta_alpha * g.dAlpha.array() /
                           (opt.vAlpha.array().sqrt() + opt.epsilon);
  }
}

}  // namespace lsnet
