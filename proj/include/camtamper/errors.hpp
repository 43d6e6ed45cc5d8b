#pragma once

#include <stdexcept>
#include <string>

namespace camtamper {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed file header or payload layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input using a feature outside the supported subset.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read, or written, or ended early.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the operation's domain (sizes, ranges, shapes).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operation called on an object in the wrong state.
class StateError : public Error {
 public:
  using Error::Error;
};

/// Invalid or unusable configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Scenario or document failed validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace camtamper
