#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace entirelab {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A magnitude left the representable extended range (|log| beyond double).
struct OverflowError : Error {
  explicit OverflowError(const std::string& what, int index = -1)
      : Error(what), index(index) {}
  int index;  // orbit/iteration index at which escape occurred, -1 if n/a
};

/// Series evaluated outside its truncation radius of trust.
struct SeriesOutOfTrustError : Error {
  using Error::Error;
};

struct InvalidInputError : Error {
  using Error::Error;
};

/// A lemma/theorem hypothesis does not hold for the given inputs.
struct HypothesisViolatedError : Error {
  using Error::Error;
};

/// log|f| fails to be positive where a Harnack-type bound requires it.
struct NotPositiveHarmonicError : HypothesisViolatedError {
  using HypothesisViolatedError::HypothesisViolatedError;
};

struct NoConvergenceError : Error {
  NoConvergenceError(const std::string& what, std::vector<double> residuals = {})
      : Error(what), residuals(std::move(residuals)) {}
  std::vector<double> residuals;  // residual trajectory for diagnostics
};

/// A zero of the integrand sits too close to the contour after retries.
struct BoundaryZeroError : Error {
  using Error::Error;
};

/// Contour quadrature failed to snap to an integer within the node budget.
struct QuadratureStallError : Error {
  using Error::Error;
};

struct CrossCheckFailedError : Error {
  using Error::Error;
};

/// Maximum term attained at the truncation edge (strict mode only).
struct TruncationDominatesError : Error {
  using Error::Error;
};

struct DegreeTooLargeError : Error {
  using Error::Error;
};

struct ZeroOnCircleError : Error {
  using Error::Error;
};

}  // namespace entirelab
