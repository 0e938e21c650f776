#pragma once

#include <stdexcept>
#include <string>

namespace gmt {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (dimension mismatch, r <= 0, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// A matrix that must be invertible (or SPD) is not, up to the configured floor.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// Numerical guards: the request is well formed but cannot be answered at the
// available resolution or size. The CLI maps these to exit code 3.
class NumericalGuardError : public Error {
 public:
  using Error::Error;
};

class ResolutionGuardError : public NumericalGuardError {
 public:
  using NumericalGuardError::NumericalGuardError;
};

class LpSizeError : public NumericalGuardError {
 public:
  using NumericalGuardError::NumericalGuardError;
};

// Malformed input files or configs. The CLI maps these to exit code 2.
class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace gmt
