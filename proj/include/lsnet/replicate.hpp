#pragma once

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "lsnet/estimator.hpp"
#include "lsnet/io.hpp"
#include "lsnet/metrics.hpp"
#include "lsnet/selection.hpp"
#include "lsnet/simulate.hpp"
#include "lsnet/types.hpp"

namespace lsnet {

enum class Method { network_only, joint, lasso, melasso };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::network_only: return "network_only";
    case Method::joint: return "joint";
    case Method::lasso: return "lasso";
    default: return "melasso";
  }
}

inline Method method_from_string(const std::string& s) {
  if (s == "network_only") return Method::network_only;
  if (s == "joint") return Method::joint;
  if (s == "lasso") return Method::lasso;
  if (s == "melasso") return Method::melasso;
  throw InvalidHyperparams("unknown method: " + s);
}

enum class Regime { less_sparse, sparse, custom };

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::less_sparse: return "less_sparse";
    case Regime::sparse: return "sparse";
    default: return "custom";
  }
}

inline Regime regime_from_string(const std::string& s) {
  if (s == "less_sparse") return Regime::less_sparse;
  if (s == "sparse") return Regime::sparse;
  if (s == "custom") return Regime::custom;
  throw InvalidHyperparams("unknown regime: " + s);
}

// Sociability presets calibrated so the generated densities match the
// reported regimes (0.37 less sparse, 0.013 sparse); `custom` leaves the
// configured range untouched.
inline void apply_regime(Regime regime, SimConfig& cfg) {
  if (regime == Regime::less_sparse) {
    cfg.alpha_low = -0.55;
    cfg.alpha_high = -0.05;
  } else if (regime == Regime::sparse) {
    cfg.alpha_low = -3.0;
    cfg.alpha_high = -2.0;
  }
}

inline int default_parallelism() {
  if (const char* env = std::getenv("LSNET_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(0..count-1) on up to `jobs` threads. The work must write only to
// its own slot; the first exception is rethrown after all threads join.
inline void parallel_for(int count, int jobs,
                         const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error = nullptr;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (int w = 0; w < jobs; ++w)
    workers.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct StudyConfig {
  Regime regime = Regime::less_sparse;
  SimConfig base;                        // seed field = master seed
  Hyperparams hyper;
  std::vector<int> noise_levels{0, 10, 20};
  std::vector<Method> methods{Method::network_only, Method::joint,
                              Method::lasso, Method::melasso};
  int replicates = 10;
  int jobs = 0;  // 0 -> default_parallelism()
};

namespace detail {

inline bool wants(const std::vector<Method>& methods, Method m) {
  for (Method x : methods)
    if (x == m) return true;
  return false;
}

}  // namespace detail

// One replicate at one noise level: generate a dataset, fit every
// requested method on it, and return one ResultRow per method. The joint
// stage-1 fit is shared by the joint/lasso/melasso rows, matching how the
// pipeline is meant to be used.
inline std::vector<ResultRow> run_replicate(const StudyConfig& cfg,
                                            int replicate, int noise) {
  SimConfig sim = cfg.base;
  apply_regime(cfg.regime, sim);
  sim.n_noise = noise;
  sim.seed = derive_seed(derive_seed(cfg.base.seed, replicate),
                         static_cast<std::uint64_t>(noise));
  const SimData data = generate(sim);
  const int q = data.covariates.q();

  ResultRow base_row;
  base_row.replicate = replicate;
  base_row.regime = to_string(cfg.regime);
  base_row.noise = noise;
  base_row.density = data.network.density();

  std::optional<FitResult> joint_fit;
  auto ensure_joint = [&]() -> const FitResult& {
    if (!joint_fit.has_value()) {
      Hyperparams h = cfg.hyper;
      h.seed = derive_seed(sim.seed, 101);
      joint_fit = fit_joint(data.network, data.covariates, h, nullptr, {},
                            sim.k);
    }
    return *joint_fit;
  };

  auto fill_eval = [](ResultRow& row, const EvalReport& report) {
    row.auc_network = report.auc_network;
    if (report.n_included > 0) {
      row.auc_covariates_mean = report.auc_covariates_mean;
      row.mean_logloss_Y = report.mean_logloss_Y;
    }
    row.mean_logloss_A = report.mean_logloss_A;
  };

  std::vector<ResultRow> rows;
  for (Method m : cfg.methods) {
    ResultRow row = base_row;
    row.method = to_string(m);
    try {
      if (m == Method::network_only) {
        Hyperparams h = cfg.hyper;
        h.lambda_weight = 0.0;
        h.seed = derive_seed(sim.seed, 100);
        FitResult fit =
            fit_joint(data.network, data.covariates, h, nullptr, {}, sim.k);
        // the covariates never trained, so score them by a one-shot
        // logistic pass on the final positions
        for (int j = 0; j < q; ++j) {
          const LogisticFit f =
              inner_logistic_fit(fit.state.Z, data.covariates.values.col(j));
          fit.state.gamma(j) = f.gamma;
          fit.state.beta.col(j) = f.beta;
        }
        fill_eval(row, evaluate(data.network, data.covariates, fit.state,
                                all_columns(q)));
        row.iterations = fit.iterations_run;
      } else if (m == Method::joint) {
        const FitResult& fit = ensure_joint();
        fill_eval(row, evaluate(data.network, data.covariates, fit.state,
                                all_columns(q)));
        row.iterations = fit.iterations_run;
      } else {
        Hyperparams h = cfg.hyper;
        h.seed = derive_seed(sim.seed, m == Method::lasso ? 102 : 103);
        if (m == Method::lasso) h.delta_grid = {0.0};
        const SelectionResult sel =
            select_and_refit(data.network, data.covariates, ensure_joint(), h);
        const CovariateMatrix kept =
            subset_columns(data.covariates, sel.active.indices);
        fill_eval(row, evaluate(data.network, kept, sel.final_fit.state,
                                all_columns(sel.active.size())));
        const SelectionRates rates =
            selection_confusion(sel.active, data.truth.active_true, q);
        row.tn_rate = rates.tn_rate;
        row.tp_rate = rates.tp_rate;
        row.n_selected = sel.active.size();
        row.chosen_lambda = sel.chosen_lambda;
        row.chosen_delta = sel.chosen_delta;
        row.iterations = sel.final_fit.iterations_run;
      }
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct StudyResult {
  std::vector<ResultRow> rows;
  std::vector<std::string> failures;  // "replicate/noise/method: message"
};

inline StudyResult run_study(const StudyConfig& cfg) {
  const int cells = cfg.replicates * static_cast<int>(cfg.noise_levels.size());
  std::vector<std::vector<ResultRow>> slots(cells);
  const int jobs = cfg.jobs > 0 ? cfg.jobs : default_parallelism();
  parallel_for(cells, jobs, [&](int cell) {
    const int rep = cell / static_cast<int>(cfg.noise_levels.size());
    const int noise =
        cfg.noise_levels[cell % static_cast<int>(cfg.noise_levels.size())];
    slots[cell] = run_replicate(cfg, rep, noise);
  });

  StudyResult out;
  for (const auto& slot : slots)
    for (const ResultRow& row : slot) {
      if (!row.ok)
        out.failures.push_back("replicate " + std::to_string(row.replicate) +
                               " noise " + std::to_string(row.noise) + " " +
                               row.method + ": " + row.error);
      out.rows.push_back(row);
    }
  return out;
}

struct AggregateRow {
  std::string method;
  int noise = 0;
  int count = 0;
  double auc_cov_mean = 0.0, auc_cov_sd = 0.0;
  double auc_net_mean = 0.0, auc_net_sd = 0.0;
  std::optional<double> tn_mean, tn_sd, tp_mean, tp_sd;
};

namespace detail {

inline std::pair<double, double> mean_sd(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= v.size();
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (v.size() - 1))};
}

}  // namespace detail

// Mean (sd) per (method, noise) over successful replicates, in the order
// the methods and noise levels were requested.
inline std::vector<AggregateRow> aggregate(const StudyConfig& cfg,
                                           const std::vector<ResultRow>& rows) {
  std::vector<AggregateRow> out;
  for (Method m : cfg.methods)
    for (int noise : cfg.noise_levels) {
      AggregateRow agg;
      agg.method = to_string(m);
      agg.noise = noise;
      std::vector<double> cov, net, tn, tp;
      for (const ResultRow& r : rows) {
        if (!r.ok || r.method != agg.method || r.noise != noise) continue;
        agg.count += 1;
        net.push_back(r.auc_network);
        if (r.auc_covariates_mean) cov.push_back(*r.auc_covariates_mean);
        if (r.tn_rate) tn.push_back(*r.tn_rate);
        if (r.tp_rate) tp.push_back(*r.tp_rate);
      }
      std::tie(agg.auc_cov_mean, agg.auc_cov_sd) = detail::mean_sd(cov);
      std::tie(agg.auc_net_mean, agg.auc_net_sd) = detail::mean_sd(net);
      if (!tn.empty()) {
        const auto [m1, s1] = detail::mean_sd(tn);
        agg.tn_mean = m1;
        agg.tn_sd = s1;
      }
      if (!tp.empty()) {
        const auto [m2, s2] = detail::mean_sd(tp);
        agg.tp_mean = m2;
        agg.tp_sd = s2;
      }
      out.push_back(std::move(agg));
    }
  return out;
}

// Covariate/network AUC aggregates, one row per (method, noise)
inline void write_auc_table(const std::vector<AggregateRow>& aggs,
                            const std::string& path) {
  std::ostringstream out;
  out << "method,noise,replicates,auc_cov_mean,auc_cov_sd,auc_net_mean,"
         "auc_net_sd\n";
  for (const AggregateRow& a : aggs)
    out << a.method << ',' << a.noise << ',' << a.count << ','
        << ioutil::format_double(a.auc_cov_mean) << ','
        << ioutil::format_double(a.auc_cov_sd) << ','
        << ioutil::format_double(a.auc_net_mean) << ','
        << ioutil::format_double(a.auc_net_sd) << '\n';
  ioutil::write_text(path, out.str());
}

// TN/TP aggregates for the selection methods
inline void write_selection_table(const std::vector<AggregateRow>& aggs,
                                  const std::string& path) {
  std::ostringstream out;
  out << "method,noise,replicates,tn_mean,tn_sd,tp_mean,tp_sd\n";
  auto opt = [](const std::optional<double>& v) {
    return v.has_value() ? ioutil::format_double(*v) : std::string("NA");
  };
  for (const AggregateRow& a : aggs) {
    if (!a.tp_mean.has_value()) continue;
    out << a.method << ',' << a.noise << ',' << a.count << ','
        << opt(a.tn_mean) << ',' << opt(a.tn_sd) << ',' << opt(a.tp_mean)
        << ',' << opt(a.tp_sd) << '\n';
  }
  ioutil::write_text(path, out.str());
}

}  // namespace lsnet
