#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace varode {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position` is the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Evaluation failure: unbound parameter, division by zero, log of zero.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// Any numerical procedure that could not deliver its contract.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NonConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegreeCapError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DefectiveMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TurningPointError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepUnderflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SpectralGapError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Invalid user configuration. The message starts with the offending field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace varode
