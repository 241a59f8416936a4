#pragma once

#include <stdexcept>
#include <string>

namespace hem {

/// Bad arguments or mismatched shapes (dimension/order/name errors).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An operation asked for more derivative information than the inputs carry.
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Iterative solver failure; carries the state at the point of giving up.
struct SolverError : std::runtime_error {
  SolverError(const std::string& what, int iterations_, double residual_norm_)
      : std::runtime_error(what), iterations(iterations_), residual_norm(residual_norm_) {}
  int iterations = 0;
  double residual_norm = 0.0;
};

/// Failure of a reference/oracle computation (shooting did not converge, etc).
struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hem
