#pragma once

// Joint latent space modeling of sparse networks with high-dimensional
// binary node covariates: two-stage estimation (annealed first-order joint
// fit, then group-lasso covariate selection with a measurement-error-aware
// refinement and refit), plus simulation, evaluation, and pilot-screening
// support.

#include "lsnet/errors.hpp"
#include "lsnet/estimator.hpp"
#include "lsnet/group_lasso.hpp"
#include "lsnet/io.hpp"
#include "lsnet/logistic.hpp"
#include "lsnet/metrics.hpp"
#include "lsnet/objective.hpp"
#include "lsnet/optimizer.hpp"
#include "lsnet/pilot.hpp"
#include "lsnet/projection.hpp"
#include "lsnet/replicate.hpp"
#include "lsnet/rng.hpp"
#include "lsnet/selection.hpp"
#include "lsnet/simulate.hpp"
#include "lsnet/types.hpp"
