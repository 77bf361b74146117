#pragma once

#include <stdexcept>
#include <string>

namespace afpp {

// Negative densities, poles of the nullclines and similar caller mistakes.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateCoefficient : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NoSignChange : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BoundednessViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace afpp
