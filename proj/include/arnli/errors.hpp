#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace arnli {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user configuration: unknown keys, out-of-range hyperparameters,
// missing resource files. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Dataset header does not provide a required column.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A single dataset record is invalid. Carries the 1-based line number of the
// record start.
class RowError : public Error {
 public:
  RowError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Corrupt or truncated model file.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Model file written by an incompatible format version.
class VersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace arnli
