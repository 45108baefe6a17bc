#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mvtest {

// Base of every exception thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric argument is outside the domain of the function (x <= 0, x > 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Matrix/vector shapes are incompatible.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Cholesky pivot at or below the positivity floor.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

// An iteration hit its cap before reaching its termination test.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

// A covariance/scenario specification violates its constraints.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

// The error SSCP matrix (or a regression design) is numerically singular.
class SingularError : public Error {
 public:
  using Error::Error;
};

// An F approximation has no valid degrees of freedom for this design.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Too many replicate failures, or a scenario failed inside a suite.
class AbortError : public Error {
 public:
  using Error::Error;
};

// Preset name not in the registry.
class UnknownPreset : public Error {
 public:
  using Error::Error;
};

// Bad command line (also carries the process exit code to use).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure (open/read/write).
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; carries a 1-based location when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t row = 0, std::size_t col = 0)
      : Error(msg), row_(row), col_(col) {}
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t row_ = 0;
  std::size_t col_ = 0;
};

// A response cell failed to parse as a number.
class NonNumericResponse : public ParseError {
 public:
  using ParseError::ParseError;
};

// Fewer than two distinct group labels in the input.
class TooFewGroups : public Error {
 public:
  using Error::Error;
};

}  // namespace mvtest
