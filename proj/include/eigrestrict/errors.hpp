#pragma once

#include <stdexcept>
#include <string>

namespace eigrestrict {

/// A computation could not be completed (non-positive-definite Gram matrix,
/// failed factorization, refinement that never settles).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A configuration or argument failed validation before any computation ran.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace eigrestrict
