#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "lsnet/errors.hpp"

namespace lsnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline bool is_binary_entry(double x) { return x == 0.0 || x == 1.0; }

// Undirected binary network on n nodes. The adjacency matrix is stored
// dense with {0,1} entries, zero diagonal, symmetric. node_ids is optional
// (filled by labeled edge-list ingestion, empty otherwise).
struct Network {
  Matrix adjacency;
  std::vector<std::string> node_ids;

  int n() const { return static_cast<int>(adjacency.rows()); }
  double density() const {
    const int m = n();
    if (m < 2) return 0.0;
    return adjacency.sum() / (static_cast<double>(m) * (m - 1));
  }
};

// n x q binary node attributes with unique column names.
struct CovariateMatrix {
  Matrix values;
  std::vector<std::string> names;

  int n() const { return static_cast<int>(values.rows()); }
  int q() const { return static_cast<int>(values.cols()); }
};

// Model parameters: latent positions Z (n x k), sociability alpha (n),
// covariate coefficients beta (k x q), intercepts gamma (q).
struct LatentState {
  Matrix Z;
  Vector alpha;
  Matrix beta;
  Vector gamma;

  LatentState() = default;
  LatentState(int n, int k, int q)
      : Z(Matrix::Zero(n, k)),
        alpha(Vector::Zero(n)),
        beta(Matrix::Zero(k, q)),
        gamma(Vector::Zero(q)) {}

  int n() const { return static_cast<int>(Z.rows()); }
  int k() const { return static_cast<int>(Z.cols()); }
  int q() const { return static_cast<int>(beta.cols()); }
};

// Selected covariate columns, strictly increasing indices.
struct ActiveSet {
  std::vector<int> indices;
  double threshold_used = 0.0;

  int size() const { return static_cast<int>(indices.size()); }
  bool contains(int j) const {
    return std::binary_search(indices.begin(), indices.end(), j);
  }
};

inline CovariateMatrix subset_columns(const CovariateMatrix& cov,
                                      const std::vector<int>& columns) {
  CovariateMatrix out;
  out.values.resize(cov.n(), static_cast<int>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out.values.col(static_cast<int>(c)) = cov.values.col(columns[c]);
    out.names.push_back(cov.names[columns[c]]);
  }
  return out;
}

enum class OptimizerKind { adam, adagrad };
enum class SelectionCriterion { aic, logloss };

inline std::string to_string(OptimizerKind k) {
  return k == OptimizerKind::adam ? "adam" : "adagrad";
}
inline std::string to_string(SelectionCriterion c) {
  return c == SelectionCriterion::aic ? "aic" : "logloss";
}

struct Hyperparams {
  double lambda_weight = 0.1;  // Lambda, covariate weight in the joint loss
  double eta0 = 5.0;           // initial annealed step size
  int max_iters = 2000;
  double stop_tol = 1e-6;
  int stop_patience = 500;
  double tau = 1e-6;                 // group-norm threshold for selection
  std::vector<double> lambda_grid;   // empty -> default_lambda_grid(k, n)
  std::vector<double> delta_grid;    // empty -> default_delta_grid()
  OptimizerKind optimizer_kind = OptimizerKind::adam;
  SelectionCriterion selection_criterion = SelectionCriterion::aic;
  std::uint64_t seed = 1;
};

inline void validate(const Network& net) {
  const int n = net.n();
  if (n < 2) throw DimensionMismatch("network must have at least 2 nodes");
  if (net.adjacency.cols() != n)
    throw DimensionMismatch("adjacency matrix must be square");
  if (!net.node_ids.empty() && static_cast<int>(net.node_ids.size()) != n)
    throw DimensionMismatch("node_ids length does not match node count");
  for (int i = 0; i < n; ++i) {
    if (net.adjacency(i, i) != 0.0)
      throw SelfLoopPresent("adjacency has a nonzero diagonal at node " +
                            std::to_string(i));
    for (int j = 0; j < n; ++j) {
      const double a = net.adjacency(i, j);
      if (!is_binary_entry(a))
        throw NonBinaryEntry("adjacency entry (" + std::to_string(i) + "," +
                             std::to_string(j) + ") is not 0/1");
      if (a != net.adjacency(j, i))
        throw AsymmetricAdjacency("adjacency differs at (" +
                                  std::to_string(i) + "," + std::to_string(j) +
                                  ")");
    }
  }
}

inline void validate(const CovariateMatrix& cov) {
  const int q = cov.q();
  if (static_cast<int>(cov.names.size()) != q)
    throw DimensionMismatch("covariate names do not match column count");
  std::set<std::string> seen(cov.names.begin(), cov.names.end());
  if (static_cast<int>(seen.size()) != q)
    throw DimensionMismatch("covariate names are not unique");
  for (int i = 0; i < cov.n(); ++i)
    for (int j = 0; j < q; ++j)
      if (!is_binary_entry(cov.values(i, j)))
        throw NonBinaryEntry("covariate entry (" + std::to_string(i) + "," +
                             std::to_string(j) + ") is not 0/1");
}

inline void validate_pair(const Network& net, const CovariateMatrix& cov) {
  validate(net);
  validate(cov);
  if (cov.n() != net.n())
    throw DimensionMismatch("covariate rows (" + std::to_string(cov.n()) +
                            ") do not match node count (" +
                            std::to_string(net.n()) + ")");
}

inline void validate(const LatentState& s) {
  if (s.k() < 1) throw DimensionMismatch("latent dimension must be >= 1");
  if (s.alpha.size() != s.n())
    throw DimensionMismatch("alpha length does not match Z rows");
  if (s.beta.rows() != s.k())
    throw DimensionMismatch("beta rows do not match latent dimension");
  if (s.gamma.size() != s.q())
    throw DimensionMismatch("gamma length does not match beta columns");
  if (!s.Z.allFinite() || !s.alpha.allFinite() || !s.beta.allFinite() ||
      !s.gamma.allFinite())
    throw NonBinaryEntry("latent state contains non-finite values");
}

inline void validate_sorted_grid(const std::vector<double>& g,
                                 const char* name) {
  if (g.empty())
    throw InvalidHyperparams(std::string(name) + " grid must be non-empty");
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    if (!(g[i] < g[i + 1]))
      throw InvalidHyperparams(std::string(name) +
                               " grid must be strictly ascending");
}

// Grids are validated only when non-empty; empty grids are filled with
// defaults at the point of use.
inline void validate(const Hyperparams& h) {
  if (h.lambda_weight < 0.0)
    throw InvalidHyperparams("lambda_weight must be >= 0");
  if (!(h.eta0 > 0.0)) throw InvalidHyperparams("eta0 must be > 0");
  if (h.max_iters < 1) throw InvalidHyperparams("max_iters must be >= 1");
  if (h.stop_patience < 1)
    throw InvalidHyperparams("stop_patience must be >= 1");
  if (h.tau < 0.0) throw InvalidHyperparams("tau must be >= 0");
  if (!h.lambda_grid.empty()) {
    validate_sorted_grid(h.lambda_grid, "lambda");
    if (h.lambda_grid.front() <= 0.0)
      throw InvalidHyperparams("lambda grid values must be > 0");
  }
  if (!h.delta_grid.empty()) {
    validate_sorted_grid(h.delta_grid, "delta");
    if (h.delta_grid.front() < 0.0 || h.delta_grid.back() > 0.5)
      throw InvalidHyperparams("delta grid values must lie in [0, 0.5]");
  }
}

}  // namespace lsnet
