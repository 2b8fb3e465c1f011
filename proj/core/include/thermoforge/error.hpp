#pragma once

#include <stdexcept>
#include <string>

namespace thermoforge {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on the inputs does not hold: bad symbol, malformed table,
// unsupported configuration. Callers can fix these by changing the input.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A guard against combinatorial or memory blowup was hit.
class SizeLimitError : public DomainError {
 public:
  using DomainError::DomainError;
};

// The requested germ cannot be realized under the stated constraints.
class FeasibilityError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A requested second coefficient lies outside the computed feasible range.
class RangeError : public FeasibilityError {
 public:
  RangeError(const std::string& what, double lo, double hi)
      : FeasibilityError(what), lo_(lo), hi_(hi) {}

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

// An iterative method failed to reach its tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace thermoforge
