#pragma once

#include <stdexcept>
#include <string>

namespace advlab {

/// Base class for all library errors so callers can catch the whole family.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Rank-deficient system at lambda = 0.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// Leverage S_j >= 1, the interpolation regime where leave-one-out breaks down.
class DegenerateLeverageError : public Error {
 public:
  using Error::Error;
};

/// Ridgeless risk diverges at the interpolation threshold gamma = 1.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Shortcut coefficients are singular (theta_hat = 0, diverged alpha, or
/// eps below the supported boundary).
class DegenerateContextError : public Error {
 public:
  using Error::Error;
};

/// Every grid point failed during lambda selection.
class SelectionError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value produced by an iterative solver.
class NumericError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace advlab
