#pragma once

#include <stdexcept>
#include <string>

namespace pff {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid user input: config files, CLI values, inconsistent problem setup.
struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Numerical failure while factorizing a subproblem matrix.
struct FactorizationError : Error {
  FactorizationError(const std::string& subproblem, const std::string& msg)
      : Error("factorization failed [" + subproblem + "]: " + msg), subproblem(subproblem) {}
  std::string subproblem;
};

// Staggered scheme exhausted its iteration budget.
struct NonConvergenceError : Error {
  NonConvergenceError(const std::string& msg, long increment, double residual)
      : Error(msg), increment(increment), residual(residual) {}
  long increment;
  double residual;
};

}  // namespace pff
