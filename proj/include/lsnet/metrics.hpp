#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "lsnet/objective.hpp"
#include "lsnet/types.hpp"

namespace lsnet {

// Mann-Whitney AUC with midrank tie handling: the probability that a
// random positive outranks a random negative, ties counted half.
inline double auc(const std::vector<double>& scores,
                  const std::vector<int>& labels) {
  const std::size_t n = scores.size();
  if (n == 0 || labels.size() != n)
    throw DimensionMismatch("auc: scores and labels must be equal length");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return scores[a] < scores[b];
  });

  double rank_sum_pos = 0.0;
  std::size_t n_pos = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * (static_cast<double>(i + 1) + (j + 1));
    for (std::size_t t = i; t <= j; ++t)
      if (labels[order[t]] != 0) {
        rank_sum_pos += midrank;
        ++n_pos;
      }
    i = j + 1;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw UndefinedAUC("labels are single-class");
  return (rank_sum_pos - 0.5 * n_pos * (n_pos + 1)) /
         (static_cast<double>(n_pos) * n_neg);
}

// AUC over the C(n,2) unordered node pairs, scores = edge probabilities.
inline double network_auc(const Network& net, const LatentState& s) {
  const int n = net.n();
  const Matrix theta = edge_logits(s);
  std::vector<double> scores;
  std::vector<int> labels;
  scores.reserve(n * (n - 1) / 2);
  labels.reserve(n * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      scores.push_back(sigmoid(theta(i, j)));
      labels.push_back(net.adjacency(i, j) != 0.0 ? 1 : 0);
    }
  return auc(scores, labels);
}

// Per-node variant: AUC of each node's incident pairs, averaged over the
// nodes where it is defined.
inline double network_auc_per_node(const Network& net, const LatentState& s) {
  const int n = net.n();
  const Matrix theta = edge_logits(s);
  double total = 0.0;
  int defined = 0;
  for (int i = 0; i < n; ++i) {
    std::vector<double> scores;
    std::vector<int> labels;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      scores.push_back(sigmoid(theta(i, j)));
      labels.push_back(net.adjacency(i, j) != 0.0 ? 1 : 0);
    }
    try {
      total += auc(scores, labels);
      ++defined;
    } catch (const UndefinedAUC&) {
    }
  }
  if (defined == 0) throw AllUndefined("no node has a defined AUC");
  return total / defined;
}

struct CovariateAuc {
  double mean = 0.0;
  std::vector<double> per_column;     // NaN where undefined
  std::vector<int> undefined_columns;  // indices into `included`
};

// Per-column AUC over nodes for the included columns; degenerate
// (single-class) columns are excluded from the mean and reported.
inline CovariateAuc covariate_auc(const CovariateMatrix& cov,
                                  const LatentState& s,
                                  const ActiveSet& included) {
  const Matrix theta = covariate_logits(s);
  CovariateAuc out;
  double total = 0.0;
  int defined = 0;
  for (int j : included.indices) {
    std::vector<double> scores(cov.n());
    std::vector<int> labels(cov.n());
    for (int i = 0; i < cov.n(); ++i) {
      scores[i] = sigmoid(theta(i, j));
      labels[i] = cov.values(i, j) != 0.0 ? 1 : 0;
    }
    try {
      const double a = auc(scores, labels);
      out.per_column.push_back(a);
      total += a;
      ++defined;
    } catch (const UndefinedAUC&) {
      out.per_column.push_back(std::numeric_limits<double>::quiet_NaN());
      out.undefined_columns.push_back(j);
    }
  }
  if (defined == 0)
    throw AllUndefined("every included covariate column is single-class");
  out.mean = total / defined;
  return out;
}

struct SelectionRates {
  std::optional<double> tn_rate;  // absent when there are no noise columns
  std::optional<double> tp_rate;  // absent when the truth is empty
};

// TN = fraction of noise columns dropped, TP = fraction of true columns
// kept.
inline SelectionRates selection_confusion(const ActiveSet& selected,
                                          const ActiveSet& truth, int q) {
  SelectionRates rates;
  int noise = 0, noise_dropped = 0, true_kept = 0;
  for (int j = 0; j < q; ++j) {
    const bool is_true = truth.contains(j);
    const bool is_selected = selected.contains(j);
    if (!is_true) {
      ++noise;
      if (!is_selected) ++noise_dropped;
    } else if (is_selected) {
      ++true_kept;
    }
  }
  if (noise > 0)
    rates.tn_rate = static_cast<double>(noise_dropped) / noise;
  if (truth.size() > 0)
    rates.tp_rate = static_cast<double>(true_kept) / truth.size();
  return rates;
}

struct EvalReport {
  double auc_network = 0.0;
  double auc_covariates_mean = 0.0;
  std::vector<double> auc_per_covariate;
  double mean_logloss_A = 0.0;
  double mean_logloss_Y = 0.0;
  std::optional<double> tn_rate;
  std::optional<double> tp_rate;
  int n_included = 0;
};

// Computes everything against the included columns; mean_logloss_Y is also
// restricted to them so the two track the same column set.
inline EvalReport evaluate(const Network& net, const CovariateMatrix& cov,
                           const LatentState& state, const ActiveSet& included,
                           const ActiveSet* truth = nullptr) {
  EvalReport report;
  report.auc_network = network_auc(net, state);
  const double n = net.n();
  report.mean_logloss_A = loss_network(net, state) / (0.5 * n * (n - 1.0));
  report.n_included = included.size();
  if (included.size() > 0) {
    const CovariateAuc ca = covariate_auc(cov, state, included);
    report.auc_covariates_mean = ca.mean;
    report.auc_per_covariate = ca.per_column;
    report.mean_logloss_Y =
        loss_covariates(cov, state, &included) / (n * included.size());
  }
  if (truth != nullptr) {
    const SelectionRates rates = selection_confusion(included, *truth, cov.q());
    report.tn_rate = rates.tn_rate;
    report.tp_rate = rates.tp_rate;
  }
  return report;
}

inline ActiveSet all_columns(int q, double tau = 0.0) {
  ActiveSet s;
  s.indices.resize(q);
  std::iota(s.indices.begin(), s.indices.end(), 0);
  s.threshold_used = tau;
  return s;
}

}  // namespace lsnet
