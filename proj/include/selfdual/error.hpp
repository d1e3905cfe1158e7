#pragma once

#include <stdexcept>
#include <string>

namespace selfdual {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad dimensions, invalid permutation, schema violation.
class InputError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened or read.
class IoError : public Error {
 public:
  using Error::Error;
};

// A precondition of an analysis operation does not hold for the given data
// (e.g. the Krauss check on a non-monotone field).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace selfdual
