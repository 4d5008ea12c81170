#pragma once

#include <stdexcept>
#include <string>

namespace rmxs {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A Laurent window does not contain every coefficient an operation needs.
class InsufficientWindow : public Error {
 public:
  using Error::Error;
};

/// Two spectral parameters are too close for a quotient by their difference.
class NearConfluent : public Error {
 public:
  using Error::Error;
};

/// The Hankel moment matrix is not positive definite (degenerate weight).
class HankelNotPD : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

class SingularDeterminant : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace rmxs
