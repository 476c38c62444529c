#pragma once

#include <stdexcept>
#include <string>

namespace stirap {

/// Argument outside the mathematical domain of an operation (negative ratio, non-positive density, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller broke a documented precondition that ties several arguments together.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A NaN or Inf showed up where a finite amplitude was required.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive integration gave up (step-size underflow or step budget exhausted).
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double failure_time)
      : std::runtime_error(what), failure_time_(failure_time) {}

  double failure_time() const noexcept { return failure_time_; }

 private:
  double failure_time_;
};

/// Invalid or inconsistent run configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stirap
