#pragma once

#include <stdexcept>
#include <string>

namespace vsrspa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class NotPsdError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class TooManySourcesError : public Error {
 public:
  using Error::Error;
};

/// The interior-point solver ran out of iterations; carries the last duality gap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_gap)
      : Error(what), last_gap_(last_gap) {}
  double last_gap() const noexcept { return last_gap_; }

 private:
  double last_gap_;
};

/// Step lengths collapsed before convergence.
class SolverBreakdownError : public Error {
 public:
  using Error::Error;
};

/// Malformed or out-of-range benchmark configuration.
class ConfigError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace vsrspa
