#pragma once

#include <stdexcept>
#include <string>

namespace demand {

// Base class for every error thrown by this library. Catching demand::Error
// is sufficient to contain all library failure modes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A constructor or configuration value is outside its admissible range
// (non-positive rate, weights that do not sum to one, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// An evaluation point is outside the domain where the requested quantity is
// defined (e.g. hazard at a point with zero survival mass asked of a curve
// that has no meaning there).
class DomainError : public Error {
 public:
  using Error::Error;
};

// The requested quantity needs a density and this distribution cannot supply
// one (convolutions do not expose densities; neither do arbitrary transforms
// without a registered derivative).
class MissingDensity : public Error {
 public:
  using Error::Error;
};

// Adaptive integration failed to reach the requested tolerance within its
// subdivision budget.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

// An improper integral shows no sign of converging: panel contributions fail
// to decay, or the running total overflows. Raised by moment computations on
// heavy tails where the integral genuinely diverges.
class DivergentIntegral : public QuadratureError {
 public:
  using QuadratureError::QuadratureError;
};

// A tail evaluation was requested so deep that survival underflows to zero
// and no meaningful digits remain.
class BeyondNumericalSupport : public Error {
 public:
  using Error::Error;
};

// Root refinement could not establish or maintain a sign-change bracket.
class BracketError : public Error {
 public:
  using Error::Error;
};

// A computed quantile does not invert the survival function to within
// tolerance (indicates an inconsistent distribution implementation).
class InverseMismatch : public Error {
 public:
  using Error::Error;
};

// A finite-difference step is too small for the working precision: the
// function values at p-h and p+h are numerically indistinguishable.
class StepTooSmall : public Error {
 public:
  using Error::Error;
};

// Malformed distribution-spec JSON: syntax errors, unknown tags, missing or
// extra fields, wrong arity.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace demand
