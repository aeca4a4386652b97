#include <catch2/catch_amalgamated.hpp>

#include "lsnet/objective.hpp"
#include "lsnet/projection.hpp"
#include "lsnet/rng.hpp"
#include "oracles.hpp"

using namespace lsnet;

TEST_CASE("center_columns subtracts per-dimension means") {
  Matrix Z(2, 1);
  Z << 1.0, 3.0;
  const Matrix C = center_columns(Z);
  REQUIRE(C(0, 0) == Catch::Approx(-1.0).margin(1e-15));
  REQUIRE(C(1, 0) == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("center_columns matches the element-wise oracle and is idempotent") {
  Rng rng(42);
  Matrix Z(10, 2);
  for (int i = 0; i < 10; ++i)
    for (int d = 0; d < 2; ++d) Z(i, d) = rng.normal();

  const Matrix C = center_columns(Z);
  for (int d = 0; d < 2; ++d) {
    double mean = 0.0;
    for (int i = 0; i < 10; ++i) mean += Z(i, d);
    mean /= 10.0;
    for (int i = 0; i < 10; ++i)
      REQUIRE(C(i, d) == Catch::Approx(Z(i, d) - mean).margin(1e-12));
    REQUIRE(std::abs(C.col(d).sum()) < 1e-10 * 10);
  }
  const Matrix C2 = center_columns(C);
  REQUIRE((C2 - C).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("center_vector handles constants and preserves differences") {
  Vector c = Vector::Constant(5, 3.7);
  REQUIRE(center_vector(c).cwiseAbs().maxCoeff() < 1e-12);

  Vector v(3);
  v << 1.0, 2.0, 3.0;
  const Vector cv = center_vector(v);
  REQUIRE(cv(0) == Catch::Approx(-1.0).margin(1e-15));
  REQUIRE(cv(1) == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(cv(2) == Catch::Approx(1.0).margin(1e-15));

  Rng rng(7);
  Vector r(11);
  for (int i = 0; i < 11; ++i) r(i) = rng.uniform(-5.0, 5.0);
  const Vector cr = center_vector(r);
  REQUIRE(std::abs(cr.sum()) < 1e-10 * 11);
  for (int i = 1; i < 11; ++i)
    REQUIRE(cr(i) - cr(0) == Catch::Approx(r(i) - r(0)).margin(1e-12));
  REQUIRE((center_vector(cr) - cr).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("diagonalize_covariance leaves an already-diagonal Gram alone") {
  Matrix Z(4, 2);
  Z << 2.0, 0.0, -2.0, 0.0, 0.0, 1.0, 0.0, -1.0;  // Z'Z = diag(8, 2)
  const auto res = diagonalize_covariance(Z, Matrix::Zero(2, 3));
  REQUIRE((res.rotation - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
          1e-12);
  REQUIRE_FALSE(res.degenerate);
}

TEST_CASE("diagonalize_covariance matches a closed-form 2x2 eigensolver") {
  Rng rng(99);
  Matrix Z(50, 2);
  for (int i = 0; i < 50; ++i)
    for (int d = 0; d < 2; ++d) Z(i, d) = rng.normal() + 0.3 * d;
  Z = center_columns(Z);
  Matrix beta(2, 4);
  for (int d = 0; d < 2; ++d)
    for (int j = 0; j < 4; ++j) beta(d, j) = rng.normal();

  const auto res = diagonalize_covariance(Z, beta);
  const Matrix S = (res.Z.transpose() * res.Z) / 50.0;
  REQUIRE(std::abs(S(0, 1)) < 1e-8);
  REQUIRE(S(0, 0) >= S(1, 1));

  const Matrix G = (Z.transpose() * Z) / 50.0;
  const auto [hi, lo] = oracle::eig2x2(G(0, 0), G(0, 1), G(1, 1));
  REQUIRE(S(0, 0) == Catch::Approx(hi).margin(1e-10));
  REQUIRE(S(1, 1) == Catch::Approx(lo).margin(1e-10));

  // rotation invariance: pairwise inner products and covariate logits
  const Matrix gram_before = Z * Z.transpose();
  const Matrix gram_after = res.Z * res.Z.transpose();
  REQUIRE((gram_before - gram_after).cwiseAbs().maxCoeff() < 1e-10);
  const Matrix logits_before = Z * beta;
  const Matrix logits_after = res.Z * res.beta;
  REQUIRE((logits_before - logits_after).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("diagonalize_covariance flags rank deficiency but still rotates") {
  Matrix Z(6, 2);
  Rng rng(5);
  for (int i = 0; i < 6; ++i) {
    Z(i, 0) = rng.normal();
    Z(i, 1) = 2.0 * Z(i, 0);  // rank 1
  }
  Z = center_columns(Z);
  const auto res = diagonalize_covariance(Z, Matrix::Zero(2, 0));
  REQUIRE(res.degenerate);
  const Matrix QtQ = res.rotation.transpose() * res.rotation;
  REQUIRE((QtQ - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("rotation sign convention is deterministic") {
  Rng rng(123);
  Matrix Z(30, 2);
  for (int i = 0; i < 30; ++i)
    for (int d = 0; d < 2; ++d) Z(i, d) = rng.normal();
  Z = center_columns(Z);
  const auto a = diagonalize_covariance(Z, Matrix::Zero(2, 0));
  const auto b = diagonalize_covariance(Z, Matrix::Zero(2, 0));
  REQUIRE((a.rotation - b.rotation).cwiseAbs().maxCoeff() == 0.0);
  for (int c = 0; c < 2; ++c) {
    int arg = 0;
    for (int r = 1; r < 2; ++r)
      if (std::abs(a.rotation(r, c)) > std::abs(a.rotation(arg, c))) arg = r;
    REQUIRE(a.rotation(arg, c) > 0.0);
  }
}
