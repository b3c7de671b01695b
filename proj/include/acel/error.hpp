#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace acel {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ill-typed data or query detected while evaluating (e.g. ordering Text).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// A lexical or syntactic problem in query text, with a 1-based position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  int line_;
  int column_;
};

/// Malformed stream, schema, or result input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A construct the selected engine cannot handle.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace acel
