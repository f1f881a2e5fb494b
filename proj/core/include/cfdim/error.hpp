#pragma once

#include <stdexcept>
#include <string>

namespace cfdim {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-positive log argument, division by an interval containing zero,
// overflow, NaN input.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// Tail sum requested at or below the family's convergence exponent.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// Interpolation error factor reached 1.
class MeshTooCoarse : public Error {
 public:
  using Error::Error;
};

// Finite alphabet asked for more letters than it has.
class LengthError : public Error {
 public:
  using Error::Error;
};

// Bisection could not certify one of its initial endpoints.
class BracketError : public Error {
 public:
  using Error::Error;
};

// Oracle enumeration would exceed its word budget.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

// Malformed alphabet descriptor or config text.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cfdim
