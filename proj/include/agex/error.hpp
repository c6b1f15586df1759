#pragma once

#include <stdexcept>
#include <string>

namespace agex {

// Base class for all engine errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input document. Carries a 1-based line number when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line = 0)
      : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// An invariant of a loaded or constructed value does not hold.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Bad run configuration (missing file, invalid field, cross-reference failure).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Filesystem problems.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace agex
