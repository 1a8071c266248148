#pragma once

#include <stdexcept>
#include <string>

namespace sepx {

// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graphs, out-of-range indices, size mismatches, bad parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

// Graph order exceeds the configured search bound of the GED engine.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace sepx
