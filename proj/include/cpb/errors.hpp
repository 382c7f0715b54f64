#pragma once

#include <stdexcept>
#include <string>

namespace cpb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad inputs: anything the caller can fix by changing parameters.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class InvalidMatrix : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidParams : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidConfig : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidAmps : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SizeLimit : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// The inputs were fine but an iterative method did not settle.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IOFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace cpb
