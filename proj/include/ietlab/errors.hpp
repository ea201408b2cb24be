#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ietlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two quadratic numbers from different fields were combined.
class FieldMismatch : public Error {
 public:
  using Error::Error;
};

/// Operands live on incompatible domains (compose, equals, restriction...).
class DomainMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed arguments: non-positive lengths, bad permutations, points outside
/// the domain, invalid records.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configurable search or enumeration cap was hit.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// An internal post-condition check failed. These indicate bugs, not bad input.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

/// Text input could not be parsed. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    if (line == 0) return what;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

}  // namespace ietlab
