#pragma once

#include <stdexcept>
#include <string>

namespace erasurelab {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A certificate side condition (admissible range, union-bound condition, shape
// feasibility) does not hold. The message names the failing inequality.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Iterative method failed to reach its tolerance, or a bracket is invalid.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration would exceed the configured cap.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

}  // namespace erasurelab
