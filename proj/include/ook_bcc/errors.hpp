#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ook_bcc {

// Invalid argument to a model or detector (bad shape, odd N_t, empty node list).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input outside the mathematical domain of a function (e.g. u >= 1 for an inverse CDF).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Training frame whose reference amplitudes are zero, so the combination
// weights are undefined.
class DegenerateTrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario document problem. key() names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error("config key '" + key + "': " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace ook_bcc
