#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace potmo {

/// Raised by planners when the target cannot be reached from the source.
class NoPathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Aggregates every failure found while validating an input bundle.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> failures);

  const std::vector<std::string>& failures() const noexcept { return failures_; }

 private:
  std::vector<std::string> failures_;
};

}  // namespace potmo
