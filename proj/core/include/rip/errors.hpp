#pragma once

#include <stdexcept>
#include <string>

namespace rip {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input dimensions, indices or shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A configured size limit was exceeded (path count, pivot budget).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Payoff evaluation failed on a concrete path.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Two time grids cannot be mapped onto each other without interpolation.
class IncompatibleGridError : public Error {
 public:
  using Error::Error;
};

/// A result failed its independent re-verification.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in a payoff expression, with 1-based line/column.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column, std::string token)
      : Error(message + " at line " + std::to_string(line) + ", column " +
              std::to_string(column) + (token.empty() ? "" : " near '" + token + "'")),
        line_(line),
        column_(column),
        token_(std::move(token)) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& token() const { return token_; }

 private:
  int line_;
  int column_;
  std::string token_;
};

}  // namespace rip
