#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace heatfield {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model parameter lies outside its admissible domain (including the
/// existence condition d < 4H + alpha).
class ParameterDomainError : public Error {
 public:
  using Error::Error;
};

/// A function was evaluated at a point outside its domain (r = 0 for the
/// Riesz weight, tau = 0 for the pinned spectral density, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested operation only has an exact backend for the Riesz kernel.
class UnsupportedKernelError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature failed to reach its tolerance. `trace` holds the
/// successive estimates, one per refinement level (or partial sums for
/// oscillatory tails).
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, std::vector<double> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

/// Cholesky factorization failed even after the maximal jitter.
class FactorizationError : public Error {
 public:
  using Error::Error;
};

/// A smoothness estimator was applied outside the smooth regime.
class RegimeError : public Error {
 public:
  using Error::Error;
};

class LagNotOnGridError : public Error {
 public:
  using Error::Error;
};

class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

class WindowUnderresolvedError : public Error {
 public:
  using Error::Error;
};

/// Malformed input files or inconsistent metadata.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace heatfield
