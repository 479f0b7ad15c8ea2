#pragma once

#include <stdexcept>
#include <string>

namespace kpp {

/// Base class for all computational errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The medium is not uniformly positive on the grid.
class NonPositiveMedium : public Error {
public:
  using Error::Error;
};

/// An iterative solver failed to reach its residual target.
class NoConvergence : public Error {
public:
  NoConvergence(const std::string& msg, int iterations)
      : Error(msg), iterations(iterations) {}
  int iterations;
};

/// A computed eigenpair is not real within tolerance.
class ComplexLeakage : public Error {
public:
  using Error::Error;
};

/// A field that must be single-signed is not.
class SignError : public Error {
public:
  using Error::Error;
};

/// The right-hand side of a singular cell problem violates its
/// orthogonality (solvability) condition.
class SolvabilityViolation : public Error {
public:
  SolvabilityViolation(const std::string& msg, int component, double magnitude)
      : Error(msg), component(component), magnitude(magnitude) {}
  int component;
  double magnitude;
};

/// A matrix required to be positive definite has an eigenvalue <= 0.
class NotPositiveDefinite : public Error {
public:
  using Error::Error;
};

/// No minimum could be bracketed in the allowed interval.
class BracketFailure : public Error {
public:
  using Error::Error;
};

/// No admissible direction in the open half-sphere (defensive).
class EmptyHalfSphere : public Error {
public:
  using Error::Error;
};

class ZeroVector : public Error {
public:
  using Error::Error;
};

/// Invalid argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Time stepping produced NaN/overflow or left the admissible range.
class StabilityViolation : public Error {
public:
  using Error::Error;
};

/// The solution reached the outer boundary of the truncated domain.
class BoundaryContamination : public Error {
public:
  using Error::Error;
};

/// A probe location left the computational grid.
class DomainExceeded : public Error {
public:
  using Error::Error;
};

/// A regression design is too degenerate to fit.
class IllConditioned : public Error {
public:
  using Error::Error;
};

class NonPositiveSample : public Error {
public:
  using Error::Error;
};

class WindowTooNarrow : public Error {
public:
  using Error::Error;
};

class ConfigParse : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace kpp
