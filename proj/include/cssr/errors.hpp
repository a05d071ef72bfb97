#pragma once

#include <stdexcept>
#include <string>

namespace cssr {

// Invalid configuration or mismatched dimensions.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input outside the mathematical domain of an operation (e.g. a negative density).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by the time integrators when the mass guard trips.
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cssr
