// errors.hpp: exception types shared across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

// Integration / linear-algebra failure (step underflow, non-convergent fit,
// residual above tolerance, ...).
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// A documented resource cap was exceeded (matrix dimension, Fock cutoff).
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Operation not defined for the requested approximation mode.
class unsupported_error : public std::invalid_argument {
 public:
  explicit unsupported_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace dicke
