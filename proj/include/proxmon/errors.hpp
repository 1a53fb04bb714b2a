#pragma once

#include <stdexcept>
#include <string>

namespace proxmon {

// Base for every error raised by the library. The CLI maps the subclasses
// below onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user configuration (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoFailure : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnknownPreset : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnknownCameraTag : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Malformed or inconsistent input documents (exit code 3).
class InputFormatError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputFormatError {
 public:
  using InputFormatError::InputFormatError;
};

class SchemaError : public InputFormatError {
 public:
  using InputFormatError::InputFormatError;
};

class InvalidRecord : public InputFormatError {
 public:
  using InputFormatError::InputFormatError;
};

class FrameMismatch : public InputFormatError {
 public:
  using InputFormatError::InputFormatError;
};

// Internal invariant violations (exit code 4).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class DegenerateOrientation : public Error {
 public:
  using Error::Error;
};

}  // namespace proxmon
