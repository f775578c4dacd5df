#pragma once

#include <stdexcept>
#include <string>

namespace meanscope {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (non-square, mismatched n, empty).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar function or matrix left its admissible domain. `value` carries the
/// offending eigenvalue or entry when there is one.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what, double value = 0.0)
      : Error(what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Cyclic Jacobi did not reach its off-diagonal target.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, int sweeps)
      : Error(what), residual_(residual), sweeps_(sweeps) {}
  double residual() const noexcept { return residual_; }
  int sweeps() const noexcept { return sweeps_; }

 private:
  double residual_;
  int sweeps_;
};

/// A size guard tripped (Kronecker dimension cap).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Caller broke a documented precondition (parameter region, instance shape,
/// descriptor range).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace meanscope
