#pragma once

#include <stdexcept>
#include <string>

namespace coalition {

// Malformed configuration: unknown keys, unparsable values, invalid parameters
// coming from a config file. Maps to CLI exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A request that exceeds the memory/size budget (state space, tables).
// Maps to CLI exit status 3.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative solver gave up. Carries the best residual it reached.
// Maps to CLI exit status 4.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace coalition
