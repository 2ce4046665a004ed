#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpbias {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or argument values (fractions out of range, unknown
/// operator names, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data that cannot be used: malformed files, missing nodes, empty graphs.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Malformed line in a text input. Carries the 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A caller broke an operation's precondition (e.g. asked for the distance
/// class of an adjacent pair).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace lpbias
