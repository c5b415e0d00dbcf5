#pragma once

#include <stdexcept>
#include <string>

namespace tfsrc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical method could not certify its tolerance.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public AccuracyError {
 public:
  using AccuracyError::AccuracyError;
};

/// Two objects that must share a size (grid, truncation) do not.
class SizeMismatch : public Error {
 public:
  using Error::Error;
};

/// Input data violates a standing assumption of the inverse problem
/// (positivity of a, F[g] != 0, E != 0, admissibility of F, ...).
class AssumptionViolation : public Error {
 public:
  using Error::Error;
};

class InadmissibleError : public AssumptionViolation {
 public:
  using AssumptionViolation::AssumptionViolation;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Malformed or out-of-range run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tfsrc
