#pragma once

#include <stdexcept>
#include <string>

namespace imrec {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside the documented domain of an operation.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Two operands live on different lattices, or a kernel does not fit.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A quotient would divide by (numerically) zero.
class ZeroDenominatorError : public Error {
 public:
  using Error::Error;
};

/// An iterate became non-finite.
class DivergenceError : public Error {
 public:
  DivergenceError(int step, const std::string& what)
      : Error(what), step_(step) {}
  int step() const noexcept { return step_; }

 private:
  int step_;
};

/// An iterative linear solve stopped before reaching its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(double achieved, const std::string& what)
      : Error(what), achieved_(achieved) {}
  double achieved_residual() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class MalformedHeaderError : public IoError {
 public:
  using IoError::IoError;
};

class UnsupportedMaxvalError : public IoError {
 public:
  using IoError::IoError;
};

class TruncatedPayloadError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace imrec
