#pragma once

#include <stdexcept>
#include <string>

namespace hsgate {

/// Bad input: unknown names, malformed files, violated preconditions.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output.
class IoError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// The integrator or optimizer could not produce a trustworthy answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hsgate
