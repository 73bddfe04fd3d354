#pragma once

#include <stdexcept>
#include <string>

namespace dnf {

/// Raised when an integration step produces a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed or semantically invalid scenario content.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dnf
