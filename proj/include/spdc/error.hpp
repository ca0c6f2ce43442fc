#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the validity range of a model (e.g. a wavelength outside
/// a Sellmeier interval).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a pole of a meromorphic function.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative method (series, quadrature, optimizer) did not reach its
/// tolerance within its budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// An equation has no admissible root (e.g. QPM with a negative period).
class NoSolutionError : public Error {
 public:
  using Error::Error;
};

/// A computation produced NaN/Inf or an otherwise unusable value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration. Line and column are 1-based; 0 means unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"
                       : what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace spdc
