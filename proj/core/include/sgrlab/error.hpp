#pragma once

#include <stdexcept>
#include <string>

namespace sgrlab {

/// Input violates a model invariant (bad rates, mismatched sizes, reducible
/// chain, unsupported configuration). The CLI maps these to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Matrices do not share the incidence pattern an operation needs.
class StructuralError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Parameters outside the domain of a closed-form expression.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Requested enumeration exceeds the configured work budget.
class BudgetError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Iterative method failed or a trajectory degenerated. Exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sgrlab
