#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lsnet/errors.hpp"
#include "lsnet/estimator.hpp"
#include "lsnet/metrics.hpp"
#include "lsnet/rng.hpp"
#include "lsnet/selection.hpp"
#include "lsnet/types.hpp"

namespace lsnet {

struct PilotConfig {
  int pilot_count = 10;
  double drop_fraction = 0.7;     // dropped by >= this fraction of pilots
  double rare_prevalence = 0.1;   // rare in ANY pilot network -> kept
};

struct ScreeningDecision {
  std::vector<int> drop_counts;        // per covariate
  std::vector<double> min_prevalence;  // min over pilot networks
  std::vector<bool> rare;
  std::vector<int> retained;
  std::vector<int> excluded;
  double reduction = 0.0;  // excluded / q
};

// The screening rule on its own: covariate j is excluded iff it was
// dropped by at least drop_fraction of the pilot networks and is not rare
// (prevalence below rare_prevalence in at least one pilot network).
inline ScreeningDecision screen_covariates(
    const std::vector<std::vector<bool>>& dropped,
    const std::vector<std::vector<double>>& prevalence,
    const PilotConfig& cfg) {
  const int pilots = static_cast<int>(dropped.size());
  if (pilots == 0) throw InsufficientNetworks("no pilot networks");
  const int q = static_cast<int>(dropped.front().size());

  ScreeningDecision d;
  d.drop_counts.assign(q, 0);
  d.min_prevalence.assign(q, 1.0);
  d.rare.assign(q, false);
  for (int p = 0; p < pilots; ++p)
    for (int j = 0; j < q; ++j) {
      if (dropped[p][j]) d.drop_counts[j] += 1;
      d.min_prevalence[j] = std::min(d.min_prevalence[j], prevalence[p][j]);
    }
  for (int j = 0; j < q; ++j) {
    d.rare[j] = d.min_prevalence[j] < cfg.rare_prevalence;
    const bool often_dropped =
        d.drop_counts[j] + 1e-9 >= cfg.drop_fraction * pilots;
    if (often_dropped && !d.rare[j])
      d.excluded.push_back(j);
    else
      d.retained.push_back(j);
  }
  d.reduction = q > 0 ? static_cast<double>(d.excluded.size()) / q : 0.0;
  return d;
}

// Uniformly random pilot subset (sorted), deterministic in the seed.
inline std::vector<int> choose_pilot_networks(int total, int pilot_count,
                                              std::uint64_t seed) {
  if (total < pilot_count)
    throw InsufficientNetworks("need at least " + std::to_string(pilot_count) +
                               " networks, have " + std::to_string(total));
  std::vector<int> order(total);
  for (int i = 0; i < total; ++i) order[i] = i;
  Rng rng(derive_seed(seed, 0x9107));
  rng.shuffle(order);
  order.resize(pilot_count);
  std::sort(order.begin(), order.end());
  return order;
}

struct PilotDataset {
  std::string id;
  Network network;
  CovariateMatrix covariates;
};

struct FullPhaseRow {
  std::string id;
  double auc_net_full = 0.0;
  double auc_net_kept = 0.0;
  std::optional<double> auc_cov_full;             // full model, all columns
  std::optional<double> auc_cov_full_restricted;  // full model, kept columns
  std::optional<double> auc_cov_kept;             // kept-only model
};

struct PilotOutcome {
  std::vector<int> pilot_indices;
  std::vector<std::string> pilot_ids;
  ScreeningDecision screening;
  std::vector<FullPhaseRow> full_phase;
};

namespace detail {

inline std::vector<double> column_prevalence(const CovariateMatrix& cov) {
  std::vector<double> p(cov.q());
  for (int j = 0; j < cov.q(); ++j) p[j] = cov.values.col(j).mean();
  return p;
}

}  // namespace detail

// Emulated pilot study: run the selection pipeline on a random subset of
// networks, screen the covariate battery with the drop rule, then analyze
// the remaining networks with the retained set and, for comparison, the
// full set.
inline PilotOutcome run_pilot(const std::vector<PilotDataset>& data,
                              int latent_dim, const Hyperparams& hyper,
                              const PilotConfig& cfg) {
  const int total = static_cast<int>(data.size());
  PilotOutcome out;
  out.pilot_indices =
      choose_pilot_networks(total, cfg.pilot_count, hyper.seed);

  const int q = total > 0 ? data.front().covariates.q() : 0;
  std::vector<std::vector<bool>> dropped;
  std::vector<std::vector<double>> prevalence;
  for (int v : out.pilot_indices) {
    const PilotDataset& d = data[v];
    if (d.covariates.q() != q)
      throw DimensionMismatch("network '" + d.id +
                              "' has a different covariate battery");
    Hyperparams h = hyper;
    h.seed = derive_seed(hyper.seed, 100 + static_cast<std::uint64_t>(v));
    const FitResult stage1 =
        fit_joint(d.network, d.covariates, h, nullptr, {}, latent_dim);
    const SelectionResult sel =
        select_and_refit(d.network, d.covariates, stage1, h);
    std::vector<bool> drop(q, true);
    for (int j : sel.active.indices) drop[j] = false;
    dropped.push_back(std::move(drop));
    prevalence.push_back(detail::column_prevalence(d.covariates));
    out.pilot_ids.push_back(d.id);
  }
  out.screening = screen_covariates(dropped, prevalence, cfg);

  ActiveSet kept;
  kept.indices = out.screening.retained;
  for (int v = 0; v < total; ++v) {
    if (std::binary_search(out.pilot_indices.begin(), out.pilot_indices.end(),
                           v))
      continue;
    const PilotDataset& d = data[v];
    Hyperparams h = hyper;
    h.seed = derive_seed(hyper.seed, 500 + static_cast<std::uint64_t>(v));

    FullPhaseRow row;
    row.id = d.id;
    const FitResult full =
        fit_joint(d.network, d.covariates, h, nullptr, {}, latent_dim);
    row.auc_net_full = network_auc(d.network, full.state);
    try {
      row.auc_cov_full =
          covariate_auc(d.covariates, full.state, all_columns(q)).mean;
    } catch (const AllUndefined&) {
    }
    if (kept.size() > 0) {
      try {
        row.auc_cov_full_restricted =
            covariate_auc(d.covariates, full.state, kept).mean;
      } catch (const AllUndefined&) {
      }
    }

    const CovariateMatrix cov_kept = subset_columns(d.covariates, kept.indices);
    const FitResult kept_fit =
        fit_joint(d.network, cov_kept, h, nullptr, {}, latent_dim);
    row.auc_net_kept = network_auc(d.network, kept_fit.state);
    if (kept.size() > 0) {
      try {
        row.auc_cov_kept =
            covariate_auc(cov_kept, kept_fit.state, all_columns(kept.size()))
                .mean;
      } catch (const AllUndefined&) {
      }
    }
    out.full_phase.push_back(std::move(row));
  }
  return out;
}

}  // namespace lsnet
