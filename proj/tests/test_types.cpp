#include <catch2/catch_amalgamated.hpp>

#include "lsnet/types.hpp"
#include "oracles.hpp"

using namespace lsnet;

namespace {

Network zero_network(int n) {
  Network net;
  net.adjacency = Matrix::Zero(n, n);
  return net;
}

CovariateMatrix zero_covariates(int n, int q) {
  CovariateMatrix cov;
  cov.values = Matrix::Zero(n, q);
  for (int j = 0; j < q; ++j) cov.names.push_back("c" + std::to_string(j));
  return cov;
}

}  // namespace

TEST_CASE("validate_pair accepts the identity case") {
  REQUIRE_NOTHROW(validate_pair(zero_network(3), zero_covariates(3, 2)));
}

TEST_CASE("validate_pair rejects asymmetric adjacency") {
  Network net = zero_network(3);
  net.adjacency(0, 1) = 1.0;
  REQUIRE_THROWS_AS(validate_pair(net, zero_covariates(3, 2)),
                    AsymmetricAdjacency);
}

TEST_CASE("validate_pair rejects shape mismatch") {
  REQUIRE_THROWS_AS(validate_pair(zero_network(3), zero_covariates(4, 2)),
                    DimensionMismatch);
}

TEST_CASE("validate rejects self-loops, non-binary entries, and NaN") {
  Network net = zero_network(3);
  net.adjacency(1, 1) = 1.0;
  REQUIRE_THROWS_AS(validate(net), SelfLoopPresent);

  Network net2 = zero_network(3);
  net2.adjacency(0, 1) = net2.adjacency(1, 0) = 0.5;
  REQUIRE_THROWS_AS(validate(net2), NonBinaryEntry);

  CovariateMatrix cov = zero_covariates(3, 2);
  cov.values(2, 1) = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(validate(cov), NonBinaryEntry);

  CovariateMatrix cov2 = zero_covariates(3, 2);
  cov2.names[1] = cov2.names[0];
  REQUIRE_THROWS_AS(validate(cov2), DimensionMismatch);
}

TEST_CASE("validate rejects tiny networks") {
  REQUIRE_THROWS_AS(validate(zero_network(1)), DimensionMismatch);
}

TEST_CASE("hyperparameter grids must be ascending and in range") {
  Hyperparams h;
  REQUIRE_NOTHROW(validate(h));
  h.delta_grid = {0.0, 0.6};
  REQUIRE_THROWS_AS(validate(h), InvalidHyperparams);
  h.delta_grid = {0.2, 0.1};
  REQUIRE_THROWS_AS(validate(h), InvalidHyperparams);
  h.delta_grid = {0.0, 0.5};
  h.lambda_grid = {0.1, 0.1};
  REQUIRE_THROWS_AS(validate(h), InvalidHyperparams);
  h.lambda_grid = {0.1, 0.2};
  REQUIRE_NOTHROW(validate(h));
  h.stop_patience = 0;
  REQUIRE_THROWS_AS(validate(h), InvalidHyperparams);
}

TEST_CASE("subset_columns keeps names and values aligned") {
  CovariateMatrix cov = zero_covariates(4, 3);
  cov.values(1, 2) = 1.0;
  const CovariateMatrix sub = subset_columns(cov, {0, 2});
  REQUIRE(sub.q() == 2);
  REQUIRE(sub.names[1] == "c2");
  REQUIRE(sub.values(1, 1) == 1.0);
}
