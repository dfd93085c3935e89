#pragma once

#include <stdexcept>
#include <string>

namespace shockfront {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of an operation (rho <= 0, r <= 0, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Iterative solver failed to reach its tolerance.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// Requested quantity is not defined for this gas law (e.g. full thermo set for the p-system).
class NotApplicableError : public Error {
public:
  using Error::Error;
};

/// A hypothesis of the lemma/proposition backing the operation is violated.
class HypothesisError : public Error {
public:
  using Error::Error;
};

/// Closed-form coefficient formulas degenerate at this parameter value (nu in {2,4}).
class SingularParameterError : public Error {
public:
  using Error::Error;
};

/// Query left the validity region rho^- > rho^+ of the jump relations.
class OutOfValidityError : public Error {
public:
  using Error::Error;
};

/// Evaluation requested past the certified horizon of an estimate.
class HorizonExceededError : public Error {
public:
  using Error::Error;
};

/// Malformed or inconsistent discrete grid.
class GridError : public Error {
public:
  using Error::Error;
};

/// Adaptive quadrature could not meet its error budget.
class QuadratureError : public Error {
public:
  using Error::Error;
};

/// ODE step size underflowed before reaching the requested time.
class StepFailureError : public Error {
public:
  using Error::Error;
};

/// Numerical blow-up detected; carries the bracketing time of the event.
class BlowupError : public Error {
public:
  BlowupError(const std::string& what, double t_lo, double t_hi)
      : Error(what), t_lo(t_lo), t_hi(t_hi) {}
  double t_lo;
  double t_hi;
};

/// Vacuum (w2 - w1 below threshold) reached during evolution.
class VacuumError : public Error {
public:
  using Error::Error;
};

/// The numerical domain of dependence became empty.
class DomainShrunkError : public Error {
public:
  using Error::Error;
};

/// Initial jump data do not satisfy the compatibility condition at t=0.
class CompatibilityError : public Error {
public:
  using Error::Error;
};

/// The front lost the density ordering rho^- > rho^+ + delta.
class ValidityLostError : public Error {
public:
  using Error::Error;
};

/// Path too short for the requested constants/quadrature.
class PathError : public Error {
public:
  using Error::Error;
};

/// Shock too close to a characteristic degeneracy for gradient relations.
class DegenerateShockError : public Error {
public:
  using Error::Error;
};

/// Configuration file problem (unknown key, missing field, bad type).
class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace shockfront
