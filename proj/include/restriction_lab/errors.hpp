#pragma once

#include <stdexcept>
#include <string>

namespace rlab {

// Every failure raised by the library derives from Error. The C API maps
// each subclass onto one rlab_status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// |x| = 0 in a convolution density evaluation.
class SingularPointError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// Zero function where a normalized quantity is requested.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class IntegrabilityError : public Error {
 public:
  using Error::Error;
};

// Grid or node count too small for the requested accuracy.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class UnderflowError : public Error {
 public:
  using Error::Error;
};

class SignError : public Error {
 public:
  using Error::Error;
};

// Input outside the class where a formula applies (odd or non-mean-zero g).
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration, function spec or command line.
class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rlab
