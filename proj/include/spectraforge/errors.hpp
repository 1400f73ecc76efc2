#pragma once

#include <stdexcept>
#include <string>

namespace spectraforge {

// Bad inputs: unreadable files, contract violations, shape mismatches.
// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical breakdown: overflow, divergence, non-finite intermediates.
// The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spectraforge
