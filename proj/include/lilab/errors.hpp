#pragma once

#include <stdexcept>
#include <string>

namespace lilab {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration: unknown keys, missing sections, unparsable values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input outside the mathematical domain of an operation (scales at or below e,
// non-increasing grids, dimension mismatches, energies beyond a cap, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Runtime numerical failure: trajectory blow-up, rank-deficient systems,
// non-finite intermediate values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace lilab
