#pragma once

#include <stdexcept>
#include <string>

namespace qarrival {

/// Rejected input: a parameter, a config key, or a precondition on a grid.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Base class for failures of the numerics themselves (quadrature, fixed points).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class QuadratureFailure : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class CutoffNonConvergence : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// The arrival-time denominator fell below the absolute quadrature floor.
class DenominatorVanishes : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// A conditional quantity was requested where its conditioning density is zero.
class DomainError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

} // namespace qarrival
