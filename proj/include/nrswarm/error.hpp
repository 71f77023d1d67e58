#pragma once

#include <stdexcept>
#include <string>

namespace nrswarm {

/// Raised for invalid caller input: bad ids, dimensions, out-of-range values.
/// The CLI maps it to exit code 1; anything else escaping is an internal error.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public UsageError {
 public:
  using UsageError::UsageError;
};

class OutOfBoundsError : public UsageError {
 public:
  using UsageError::UsageError;
};

}  // namespace nrswarm
