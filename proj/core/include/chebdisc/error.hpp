#pragma once

#include <stdexcept>
#include <string>

namespace chebdisc {

/// Invalid input to a public operation (bad dimension, infeasible request, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request would exceed a configured size limit or overflow an integer type.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// An internal numerical consistency check failed.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An iterative solver hit its iteration limit.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}

  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

}  // namespace chebdisc
