#pragma once

#include <stdexcept>
#include <string>

namespace sharpmult {

/// Raised when an argument violates an operation's precondition.
/// The CLI maps it to exit status 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot produce a trustworthy answer
/// (inconsistent bracket, non-convergence). The CLI maps it to exit status 3.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A symbol could not be evaluated at the requested frequency.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A witness certificate would be void (symbol not real, even and
/// homogeneous of order 0, or not constant along an axis).
class CertificationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace sharpmult
