#ifndef THZQS_ERRORS_HPP
#define THZQS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace thzqs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation outside a declared validity range (dispersion bands, grids).
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument values (negative frequency, transmissivity > 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Root bracketing failed; the message reports the scanned interval.
class NoRootError : public Error {
 public:
  using Error::Error;
};

/// A Bogoliubov or beam-splitter block violates its unitarity invariant.
class NonUnitaryError : public Error {
 public:
  using Error::Error;
};

/// Quadrature did not reach the requested tolerance; message carries the
/// achieved relative error.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : Error(what), achieved_rel_error(achieved) {}
  double achieved_rel_error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class NotConvergedError : public FitError {
 public:
  using FitError::FitError;
};

class EnvelopeAtEdgeError : public FitError {
 public:
  using FitError::FitError;
};

class BranchMismatchError : public Error {
 public:
  using Error::Error;
};

class NonUniformGridError : public Error {
 public:
  using Error::Error;
};

class TooShortError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; names the offending line (and column when known).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Configuration schema violation; message carries the key path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace thzqs

#endif
