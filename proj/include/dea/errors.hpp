#pragma once

#include <stdexcept>
#include <string>

namespace dea {

// Base class for all library errors. Catch this to handle anything thrown
// by the library; catch the subclasses to distinguish failure modes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// Malformed user input: bad CSV cells, dimension mismatches, non-positive
// inputs, out-of-range indices, failed sample-size gates. Maps to exit
// code 1 at the CLI boundary.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Numeric breakdown inside the solver: non-finite values after pivoting,
// or iteration counts that exceed the configured ceiling.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A condition that indicates a bug in this library rather than bad input,
// e.g. a second-stage LP reported infeasible at a verified optimum.
class InternalError : public Error {
 public:
  using Error::Error;
};

// A well-formed request outside the supported configuration space, with a
// pointer to the supported alternative in the message.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace dea
