// lsnet command-line interface: simulate / fit / replicate / pilot /
// evaluate. See README.md for the file formats each command reads and
// writes. Exit codes: 0 success, 1 numerical failure, 2 usage or data
// error.

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lsnet/lsnet.hpp"

namespace fs = std::filesystem;
using namespace lsnet;

namespace {

struct HyperFlags {
  Hyperparams hyper;
  void attach(CLI::App* cmd) {
    cmd->add_option("--lambda-weight", hyper.lambda_weight,
                    "covariate weight in the joint loss")
        ->capture_default_str();
    cmd->add_option("--eta0", hyper.eta0, "initial annealed step size")
        ->capture_default_str();
    cmd->add_option("--max-iters", hyper.max_iters, "outer iteration budget")
        ->capture_default_str();
    cmd->add_option("--stop-tol", hyper.stop_tol,
                    "early-stop tolerance on the mean log losses")
        ->capture_default_str();
    cmd->add_option("--stop-patience", hyper.stop_patience,
                    "iterations the losses must stay flat")
        ->capture_default_str();
    cmd->add_option("--tau", hyper.tau, "group-norm selection threshold")
        ->capture_default_str();
    cmd->add_option("--lambda-grid", hyper.lambda_grid,
                    "explicit lasso penalty grid (ascending)")
        ->delimiter(',');
    cmd->add_option("--delta-grid", hyper.delta_grid,
                    "explicit stabilizer grid (ascending, in [0,0.5])")
        ->delimiter(',');
    cmd->add_option("--optimizer", hyper.optimizer_kind, "adam or adagrad")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, OptimizerKind>{
                {"adam", OptimizerKind::adam},
                {"adagrad", OptimizerKind::adagrad}},
            CLI::ignore_case));
    cmd->add_option("--criterion", hyper.selection_criterion,
                    "lambda selection criterion: aic or logloss")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, SelectionCriterion>{
                {"aic", SelectionCriterion::aic},
                {"logloss", SelectionCriterion::logloss}},
            CLI::ignore_case));
  }
};

std::string zero_pad(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

const std::vector<std::string> kSubcommands{"simulate", "fit", "replicate",
                                            "pilot", "evaluate"};

// Expands "--config FILE" into the flags it sets: one "key = value" per
// line, keys named like the long flags. Explicitly passed flags win
// (under any alias), so those keys are skipped.
std::vector<std::string> expand_config_args(CLI::App& app, int argc,
                                            char** argv) {
  std::vector<std::string> tokens(argv + 1, argv + argc);

  std::string config_path;
  std::vector<std::string>::iterator sub_at = tokens.end();
  CLI::App* sub = nullptr;
  for (auto it = tokens.begin(); it != tokens.end(); ++it) {
    if (*it == "--config" && it + 1 != tokens.end())
      config_path = *(it + 1);
    else if (it->rfind("--config=", 0) == 0)
      config_path = it->substr(9);
    else if (sub == nullptr &&
             std::find(kSubcommands.begin(), kSubcommands.end(), *it) !=
                 kSubcommands.end()) {
      sub = app.get_subcommand(*it);
      sub_at = it + 1;
    }
  }
  if (config_path.empty() || sub == nullptr) return tokens;

  std::set<std::string> explicit_long;
  std::set<char> explicit_short;
  for (const std::string& t : tokens) {
    if (t.rfind("--", 0) == 0)
      explicit_long.insert(t.substr(2, t.find('=') - 2));
    else if (t.size() >= 2 && t[0] == '-' && t[1] != '-')
      explicit_short.insert(t[1]);
  }
  auto given_explicitly = [&](const std::string& key) {
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) return false;  // let the parser report it
    for (const std::string& lname : opt->get_lnames())
      if (explicit_long.count(lname) > 0) return true;
    for (const std::string& sname : opt->get_snames())
      if (!sname.empty() && explicit_short.count(sname[0]) > 0) return true;
    return false;
  };

  std::vector<std::string> injected;
  const std::vector<std::string> lines = ioutil::read_lines(config_path);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string line = ioutil::strip(lines[ln]);
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    const std::string key = ioutil::strip(line.substr(0, eq));
    if (key.empty())
      throw ParseError(config_path + ":" + std::to_string(ln + 1) +
                       ": expected 'key = value'");
    if (key == "config" || given_explicitly(key)) continue;
    if (eq == std::string::npos)
      injected.push_back("--" + key);
    else
      injected.push_back("--" + key + "=" +
                         ioutil::strip(line.substr(eq + 1)));
  }
  tokens.insert(sub_at, injected.begin(), injected.end());
  return tokens;
}

void write_report_csv(const EvalReport& report, const std::string& method,
                      double density, int iterations, const std::string& path,
                      std::optional<double> chosen_lambda = std::nullopt,
                      std::optional<double> chosen_delta = std::nullopt,
                      std::optional<int> n_selected = std::nullopt) {
  ResultRow row;
  row.replicate = 0;
  row.method = method;
  row.regime = "data";
  row.noise = 0;
  row.density = density;
  row.auc_network = report.auc_network;
  if (report.n_included > 0) {
    row.auc_covariates_mean = report.auc_covariates_mean;
    row.mean_logloss_Y = report.mean_logloss_Y;
  }
  row.mean_logloss_A = report.mean_logloss_A;
  row.tn_rate = report.tn_rate;
  row.tp_rate = report.tp_rate;
  row.n_selected = n_selected;
  row.chosen_lambda = chosen_lambda;
  row.chosen_delta = chosen_delta;
  row.iterations = iterations;
  export_results({row}, path);
}

struct DataPair {
  Network network;
  CovariateMatrix covariates;
};

DataPair load_pair(const std::string& adjacency_path,
                   const std::string& covariates_path, NetworkFormat format) {
  DataPair data;
  ReadStats stats;
  data.network = read_network(adjacency_path, format, &stats);
  if (stats.self_loops_dropped > 0)
    std::cerr << "warning: dropped " << stats.self_loops_dropped
              << " self-loop(s) from " << adjacency_path << "\n";
  std::vector<std::string> row_ids;
  data.covariates = read_covariates(covariates_path, &row_ids);
  if (!row_ids.empty() && !data.network.node_ids.empty())
    data.covariates =
        align_rows(data.covariates, row_ids, data.network.node_ids);
  validate_pair(data.network, data.covariates);
  return data;
}

int cmd_simulate(const SimConfig& base, Regime regime, int replicates,
                 const std::string& out_dir) {
  fs::create_directories(out_dir);
  for (int r = 0; r < replicates; ++r) {
    SimConfig cfg = base;
    apply_regime(regime, cfg);
    cfg.seed = derive_seed(base.seed, r);
    const SimData data = generate(cfg);
    const std::string stem = (fs::path(out_dir) / ("rep" + zero_pad(r, 3))).string();
    write_adjacency(data.network, stem + "_adjacency.csv");
    write_covariates(data.covariates, stem + "_covariates.csv");
    write_truth(data.truth, stem + "_truth.json");
    std::cout << "replicate " << r << ": n=" << data.network.n()
              << " q=" << data.covariates.q()
              << " density=" << data.network.density() << "\n";
  }
  return 0;
}

int cmd_fit(const std::string& adjacency_path,
            const std::string& covariates_path, NetworkFormat format,
            Method method, int latent_dim, int restarts, Hyperparams hyper,
            const std::string& out_dir) {
  const DataPair data = load_pair(adjacency_path, covariates_path, format);
  fs::create_directories(out_dir);
  if (method == Method::network_only) hyper.lambda_weight = 0.0;
  if (method == Method::lasso) hyper.delta_grid = {0.0};

  // multiple restarts keep the run with the best per-parameter loss
  FitResult stage1;
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, restarts); ++r) {
    Hyperparams h = hyper;
    h.seed = restarts > 1 ? derive_seed(hyper.seed, r) : hyper.seed;
    FitResult fit =
        fit_joint(data.network, data.covariates, h, nullptr, {}, latent_dim);
    const double score = fit.trace[fit.best_iteration - 1].per_param;
    if (score < best) {
      best = score;
      stage1 = std::move(fit);
    }
  }

  ModelSnapshot snap;
  snap.seed = hyper.seed;
  snap.data_checksum = checksum_pair(data.network, data.covariates);
  snap.hyper = hyper;

  EvalReport report;
  if (method == Method::lasso || method == Method::melasso) {
    const SelectionResult sel =
        select_and_refit(data.network, data.covariates, stage1, hyper);
    const CovariateMatrix kept =
        subset_columns(data.covariates, sel.active.indices);
    report = evaluate(data.network, kept, sel.final_fit.state,
                      all_columns(sel.active.size()));
    snap.stage = SnapshotStage::refit;
    snap.state = sel.final_fit.state;
    snap.active = sel.active;
    write_snapshot(snap, (fs::path(out_dir) / "snapshot.json").string());
    write_loss_trace(sel.final_fit.trace,
                     (fs::path(out_dir) / "trace.csv").string());
    write_report_csv(report, to_string(method), data.network.density(),
                     sel.final_fit.iterations_run,
                     (fs::path(out_dir) / "report.csv").string(),
                     sel.chosen_lambda, sel.chosen_delta, sel.active.size());
    std::cout << "selected " << sel.active.size() << "/" << data.covariates.q()
              << " covariates (lambda=" << sel.chosen_lambda
              << ", delta=" << sel.chosen_delta << ")\n";
  } else {
    if (method == Method::network_only) {
      for (int j = 0; j < data.covariates.q(); ++j) {
        const LogisticFit f = inner_logistic_fit(
            stage1.state.Z, data.covariates.values.col(j));
        stage1.state.gamma(j) = f.gamma;
        stage1.state.beta.col(j) = f.beta;
      }
    }
    report = evaluate(data.network, data.covariates, stage1.state,
                      all_columns(data.covariates.q()));
    snap.stage = SnapshotStage::stage1;
    snap.state = stage1.state;
    write_snapshot(snap, (fs::path(out_dir) / "snapshot.json").string());
    write_loss_trace(stage1.trace, (fs::path(out_dir) / "trace.csv").string());
    write_report_csv(report, to_string(method), data.network.density(),
                     stage1.iterations_run,
                     (fs::path(out_dir) / "report.csv").string());
  }
  std::cout << "network AUC " << report.auc_network;
  if (report.n_included > 0)
    std::cout << ", mean covariate AUC " << report.auc_covariates_mean;
  std::cout << "\n";
  return 0;
}

int cmd_replicate(const StudyConfig& cfg, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const StudyResult result = run_study(cfg);
  for (const std::string& f : result.failures)
    std::cerr << "failed: " << f << "\n";
  export_results(result.rows, (fs::path(out_dir) / "results.csv").string());
  const std::vector<AggregateRow> aggs = aggregate(cfg, result.rows);
  write_auc_table(aggs, (fs::path(out_dir) / "table_auc.csv").string());
  write_selection_table(aggs,
                        (fs::path(out_dir) / "table_selection.csv").string());
  bool any_ok = false;
  for (const ResultRow& r : result.rows) any_ok = any_ok || r.ok;
  if (!any_ok) {
    std::cerr << "every replicate failed\n";
    return 1;
  }
  std::cout << "wrote " << result.rows.size() << " rows ("
            << result.failures.size() << " failures) to " << out_dir << "\n";
  return 0;
}

int cmd_pilot(const std::string& manifest_path, int latent_dim,
              const Hyperparams& hyper, const PilotConfig& pilot_cfg,
              int jobs, const std::string& out_dir) {
  const DatasetManifest manifest = read_manifest(manifest_path);
  const fs::path base = fs::path(manifest_path).parent_path();
  auto resolve = [&](const std::string& p) {
    return fs::path(p).is_absolute() ? p : (base / p).string();
  };

  std::vector<PilotDataset> data;
  for (const ManifestEntry& e : manifest.entries) {
    PilotDataset d;
    d.id = e.id;
    const DataPair pair = load_pair(resolve(e.adjacency_path),
                                    resolve(e.covariates_path),
                                    NetworkFormat::adjacency);
    d.network = pair.network;
    d.covariates = pair.covariates;
    data.push_back(std::move(d));
  }
  (void)jobs;

  const PilotOutcome outcome = run_pilot(data, latent_dim, hyper, pilot_cfg);
  fs::create_directories(out_dir);

  const CovariateMatrix& first = data.front().covariates;
  std::ostringstream screening;
  screening << "covariate,name,drop_count,pilot_count,min_prevalence,rare,"
               "retained\n";
  for (int j = 0; j < first.q(); ++j) {
    const bool retained =
        std::binary_search(outcome.screening.retained.begin(),
                           outcome.screening.retained.end(), j);
    screening << j << ',' << first.names[j] << ','
              << outcome.screening.drop_counts[j] << ','
              << outcome.pilot_ids.size() << ','
              << ioutil::format_double(outcome.screening.min_prevalence[j])
              << ',' << (outcome.screening.rare[j] ? 1 : 0) << ','
              << (retained ? 1 : 0) << '\n';
  }
  ioutil::write_text((fs::path(out_dir) / "screening.csv").string(),
                     screening.str());

  std::ostringstream full;
  full << "id,auc_net_full,auc_net_kept,auc_cov_full,auc_cov_full_restricted,"
          "auc_cov_kept\n";
  auto opt = [](const std::optional<double>& v) {
    return v.has_value() ? ioutil::format_double(*v) : std::string("NA");
  };
  for (const FullPhaseRow& r : outcome.full_phase)
    full << r.id << ',' << ioutil::format_double(r.auc_net_full) << ','
         << ioutil::format_double(r.auc_net_kept) << ',' << opt(r.auc_cov_full)
         << ',' << opt(r.auc_cov_full_restricted) << ','
         << opt(r.auc_cov_kept) << '\n';
  ioutil::write_text((fs::path(out_dir) / "full_phase.csv").string(),
                     full.str());

  std::cout << "pilot networks:";
  for (const std::string& id : outcome.pilot_ids) std::cout << ' ' << id;
  std::cout << "\nretained " << outcome.screening.retained.size() << "/"
            << first.q() << " covariates; data-collection reduction "
            << 100.0 * outcome.screening.reduction << "%\n";
  return 0;
}

int cmd_evaluate(const std::string& snapshot_path,
                 const std::string& adjacency_path,
                 const std::string& covariates_path, NetworkFormat format,
                 const std::string& out_file, bool per_node_auc) {
  const ModelSnapshot snap = read_snapshot(snapshot_path);
  const DataPair data = load_pair(adjacency_path, covariates_path, format);
  if (!verify_checksum(snap, data.network, data.covariates))
    std::cerr << "warning: snapshot checksum does not match the data\n";
  if (snap.state.n() != data.network.n())
    throw DimensionMismatch("snapshot has n=" + std::to_string(snap.state.n()) +
                            " but data has n=" +
                            std::to_string(data.network.n()));

  EvalReport report;
  std::optional<int> n_selected;
  if (snap.active.has_value()) {
    const CovariateMatrix kept =
        subset_columns(data.covariates, snap.active->indices);
    if (kept.q() != snap.state.q())
      throw DimensionMismatch("snapshot active set does not match its state");
    report = evaluate(data.network, kept, snap.state,
                      all_columns(snap.active->size()));
    n_selected = snap.active->size();
  } else {
    if (snap.state.q() != data.covariates.q())
      throw DimensionMismatch("snapshot has q=" + std::to_string(snap.state.q()) +
                              " but data has q=" +
                              std::to_string(data.covariates.q()));
    report = evaluate(data.network, data.covariates, snap.state,
                      all_columns(data.covariates.q()));
  }
  write_report_csv(report, snap.stage == SnapshotStage::refit ? "refit"
                                                              : "stage1",
                   data.network.density(), 0, out_file, std::nullopt,
                   std::nullopt, n_selected);
  std::cout << "network AUC " << report.auc_network;
  if (per_node_auc)
    std::cout << " (per-node average "
              << network_auc_per_node(data.network, snap.state) << ")";
  if (report.n_included > 0)
    std::cout << ", mean covariate AUC " << report.auc_covariates_mean;
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint latent space modeling of sparse networks with "
               "covariate selection"};
  app.require_subcommand(1);

  const std::map<std::string, Regime> regime_names{
      {"less_sparse", Regime::less_sparse},
      {"sparse", Regime::sparse},
      {"custom", Regime::custom}};
  const std::map<std::string, Method> method_names{
      {"network_only", Method::network_only},
      {"joint", Method::joint},
      {"lasso", Method::lasso},
      {"melasso", Method::melasso}};
  const std::map<std::string, NetworkFormat> format_names{
      {"edgelist", NetworkFormat::edgelist},
      {"adjacency", NetworkFormat::adjacency}};

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "generate synthetic datasets");
  std::string sim_config;
  sim->add_option("--config", sim_config, "flat key=value config file");
  SimConfig sim_cfg;
  Regime sim_regime = Regime::less_sparse;
  int sim_replicates = 1;
  std::string sim_out;
  sim->add_option("--out", sim_out, "output directory")->required();
  sim->add_option("-n,--nodes", sim_cfg.n)->capture_default_str();
  sim->add_option("-q,--covariates", sim_cfg.q)->capture_default_str();
  sim->add_option("-k,--latent-dim", sim_cfg.k)->capture_default_str();
  sim->add_option("--noise", sim_cfg.n_noise, "inactive covariate count")
      ->capture_default_str();
  sim->add_option("--regime", sim_regime, "density regime")
      ->transform(CLI::CheckedTransformer(regime_names, CLI::ignore_case));
  sim->add_option("--alpha-low", sim_cfg.alpha_low,
                  "sociability lower bound (custom regime)")
      ->capture_default_str();
  sim->add_option("--alpha-high", sim_cfg.alpha_high,
                  "sociability upper bound (custom regime)")
      ->capture_default_str();
  sim->add_option("--beta-mean", sim_cfg.beta_mean)->capture_default_str();
  sim->add_option("--beta-spread", sim_cfg.beta_spread)->capture_default_str();
  sim->add_flag("--beta-spread-is-sd", sim_cfg.spread_is_sd,
                "read beta-spread as a standard deviation, not a variance");
  sim->add_option("-R,--replicates", sim_replicates)->capture_default_str();
  sim->add_option("--seed", sim_cfg.seed, "master seed")->capture_default_str();

  // ---- fit ----
  auto* fit = app.add_subcommand("fit", "fit one dataset");
  std::string fit_config;
  fit->add_option("--config", fit_config, "flat key=value config file");
  std::string fit_adj, fit_cov, fit_out;
  NetworkFormat fit_format = NetworkFormat::adjacency;
  Method fit_method = Method::joint;
  int fit_k = 2, fit_restarts = 1;
  HyperFlags fit_hyper;
  fit->add_option("--adjacency", fit_adj, "network file")->required();
  fit->add_option("--covariates", fit_cov, "covariate table")->required();
  fit->add_option("--format", fit_format, "network file format")
      ->transform(CLI::CheckedTransformer(format_names, CLI::ignore_case));
  fit->add_option("--method", fit_method,
                  "network_only, joint, lasso, or melasso")
      ->transform(CLI::CheckedTransformer(method_names, CLI::ignore_case));
  fit->add_option("-k,--latent-dim", fit_k)->capture_default_str();
  fit->add_option("--restarts", fit_restarts,
                  "random restarts; the best per-parameter run is kept")
      ->capture_default_str();
  fit->add_option("--out", fit_out, "output directory")->required();
  fit->add_option("--seed", fit_hyper.hyper.seed)->capture_default_str();
  fit_hyper.attach(fit);

  // ---- replicate ----
  auto* rep = app.add_subcommand("replicate", "simulation study");
  std::string rep_config;
  rep->add_option("--config", rep_config, "flat key=value config file");
  StudyConfig study;
  std::string rep_out;
  rep->add_option("--out", rep_out, "output directory")->required();
  rep->add_option("--regime", study.regime)
      ->transform(CLI::CheckedTransformer(regime_names, CLI::ignore_case));
  rep->add_option("--noise-levels", study.noise_levels)->delimiter(',');
  std::vector<std::string> method_list{"network_only", "joint", "lasso",
                                       "melasso"};
  rep->add_option("--methods", method_list, "methods to run")->delimiter(',');
  rep->add_option("-R,--replicates", study.replicates)->capture_default_str();
  rep->add_option("-n,--nodes", study.base.n)->capture_default_str();
  rep->add_option("-q,--covariates", study.base.q)->capture_default_str();
  rep->add_option("-k,--latent-dim", study.base.k)->capture_default_str();
  rep->add_option("--alpha-low", study.base.alpha_low)->capture_default_str();
  rep->add_option("--alpha-high", study.base.alpha_high)
      ->capture_default_str();
  rep->add_option("--jobs", study.jobs,
                  "worker threads (default: LSNET_JOBS or hardware)");
  rep->add_option("--seed", study.base.seed, "master seed")
      ->capture_default_str();
  HyperFlags rep_hyper;
  rep_hyper.attach(rep);

  // ---- pilot ----
  auto* pilot = app.add_subcommand("pilot", "emulated pilot screening study");
  std::string pilot_config;
  pilot->add_option("--config", pilot_config, "flat key=value config file");
  std::string pilot_manifest, pilot_out;
  int pilot_k = 2, pilot_jobs = 0;
  PilotConfig pilot_cfg;
  HyperFlags pilot_hyper;
  pilot->add_option("--manifest", pilot_manifest, "dataset manifest (json)")
      ->required();
  pilot->add_option("--out", pilot_out, "output directory")->required();
  pilot->add_option("-k,--latent-dim", pilot_k)->capture_default_str();
  pilot->add_option("--pilot-count", pilot_cfg.pilot_count)
      ->capture_default_str();
  pilot->add_option("--drop-fraction", pilot_cfg.drop_fraction)
      ->capture_default_str();
  pilot->add_option("--rare-prevalence", pilot_cfg.rare_prevalence)
      ->capture_default_str();
  pilot->add_option("--jobs", pilot_jobs);
  pilot->add_option("--seed", pilot_hyper.hyper.seed)->capture_default_str();
  pilot_hyper.attach(pilot);

  // ---- evaluate ----
  auto* eval = app.add_subcommand("evaluate", "recompute metrics from a snapshot");
  std::string eval_config;
  eval->add_option("--config", eval_config, "flat key=value config file");
  std::string eval_snap, eval_adj, eval_cov, eval_out = "report.csv";
  NetworkFormat eval_format = NetworkFormat::adjacency;
  bool eval_per_node = false;
  eval->add_option("--snapshot", eval_snap)->required();
  eval->add_option("--adjacency", eval_adj)->required();
  eval->add_option("--covariates", eval_cov)->required();
  eval->add_option("--format", eval_format)
      ->transform(CLI::CheckedTransformer(format_names, CLI::ignore_case));
  eval->add_option("--out", eval_out, "report file")->capture_default_str();
  eval->add_flag("--per-node-network-auc", eval_per_node,
                 "also report the per-node-averaged network AUC");

  try {
    std::vector<std::string> tokens = expand_config_args(app, argc, argv);
    std::reverse(tokens.begin(), tokens.end());
    app.parse(std::move(tokens));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sim->parsed()) {
      if (sim_regime != Regime::custom) apply_regime(sim_regime, sim_cfg);
      return cmd_simulate(sim_cfg, sim_regime, sim_replicates, sim_out);
    }
    if (fit->parsed())
      return cmd_fit(fit_adj, fit_cov, fit_format, fit_method, fit_k,
                     fit_restarts, fit_hyper.hyper, fit_out);
    if (rep->parsed()) {
      study.hyper = rep_hyper.hyper;
      study.hyper.seed = study.base.seed;
      study.methods.clear();
      for (const std::string& m : method_list)
        study.methods.push_back(method_from_string(m));
      return cmd_replicate(study, rep_out);
    }
    if (pilot->parsed())
      return cmd_pilot(pilot_manifest, pilot_k, pilot_hyper.hyper, pilot_cfg,
                       pilot_jobs, pilot_out);
    if (eval->parsed())
      return cmd_evaluate(eval_snap, eval_adj, eval_cov, eval_format, eval_out,
                          eval_per_node);
  } catch (const NonFiniteLoss& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const AllEmpty& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
