#pragma once

#include <stdexcept>
#include <string>

namespace betacoal {

// Error categories. The CLI maps these onto its exit codes.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input outside the domain of a special function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Parameters outside the regime in which an operation is defined (e.g. a > 1
// for a stable limit, q + a <= 1 for the pseudo-moment bound).
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request exceeds a configured size cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace betacoal
