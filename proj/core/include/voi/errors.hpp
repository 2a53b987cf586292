#pragma once

#include <stdexcept>
#include <string>

namespace voi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Sigma_s cannot be inverted at working precision.
class SingularSignalCovariance : public Error {
 public:
  using Error::Error;
};

class NotPSD : public Error {
 public:
  using Error::Error;
};

/// An operation needs W to be invertible and it is not.
class SingularOperator : public Error {
 public:
  using Error::Error;
};

class UnsupportedSet : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace voi
