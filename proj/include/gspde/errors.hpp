#pragma once

#include <stdexcept>
#include <string>

namespace gspde {

// Base class for every failure raised by the library. The CLI maps the
// concrete subclasses onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter outside the admissible range of a construction.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

// Covariance matrix indefinite even after diagonal jitter.
class FactorizationError : public Error {
 public:
  using Error::Error;
};

// Noise path with components outside the V-coefficient space.
class RangeError : public Error {
 public:
  using Error::Error;
};

class InnerSolveError : public Error {
 public:
  InnerSolveError(const std::string& what, int step, double residual)
      : Error(what), step_(step), residual_(residual) {}

  int step() const { return step_; }
  double residual() const { return residual_; }

 private:
  int step_;
  double residual_;
};

// Time step violates dt * max(0, c) < 1 for the declared monotonicity constant.
class ContractError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gspde
