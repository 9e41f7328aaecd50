#pragma once

#include <stdexcept>
#include <string>

namespace superortho {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual or JSON input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An exact comparison could not be certified at the configured precision.
class UndecidedError : public Error {
 public:
  using Error::Error;
};

}  // namespace superortho
