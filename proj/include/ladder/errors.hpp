#pragma once

#include <stdexcept>
#include <string>

namespace ladder {

/// Argument outside the mathematical domain of an operation
/// (sector index out of range, field outside an asymptotic window, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Basis lookup of a configuration that does not belong to the sector.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Caller broke a precondition (dimension mismatch, unnormalized state).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computed object failed a numerical sanity check (e.g. a reduced
/// density matrix with a clearly negative eigenvalue).
class NumericalConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Analytic model parameters that produce an unphysical density matrix.
class ParameterValidityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative eigensolver ran out of iterations.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double best_residual, int iterations)
      : std::runtime_error(what), best_residual_(best_residual), iterations_(iterations) {}

  double best_residual() const noexcept { return best_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double best_residual_;
  int iterations_;
};

}  // namespace ladder
