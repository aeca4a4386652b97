#pragma once

#include <stdexcept>
#include <string>

namespace lsnet {

// Base for everything this library throws. Conditions that a caller is
// expected to tolerate (non-convergence, degenerate covariance, checksum
// mismatch) are reported as flags on result structs instead.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input validation
struct DimensionMismatch : Error {
  using Error::Error;
};
struct AsymmetricAdjacency : Error {
  using Error::Error;
};
struct NonBinaryEntry : Error {
  using Error::Error;
};
struct SelfLoopPresent : Error {
  using Error::Error;
};
struct InvalidHyperparams : Error {
  using Error::Error;
};

// Numerical failures
struct NonFiniteLoss : Error {
  using Error::Error;
};
struct AllEmpty : Error {
  using Error::Error;
};
struct UndefinedAUC : Error {
  using Error::Error;
};
struct AllUndefined : Error {
  using Error::Error;
};

// I/O
struct IoError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct HeaderMissing : Error {
  using Error::Error;
};
struct VersionMismatch : Error {
  using Error::Error;
};
struct InsufficientNetworks : Error {
  using Error::Error;
};

}  // namespace lsnet
