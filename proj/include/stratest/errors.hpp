#pragma once

#include <stdexcept>
#include <string>

namespace stratest {

// Malformed files, bad configuration, mismatched designs.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Singular systems, zero means, zero variances, non-finite results.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Data that parses but fails a consistency check (strict reconciliation,
// excessive non-finite replications).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stratest
