#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dwlab {

/// Malformed or inconsistent input (unknown vertex, mismatched ids, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Payload that failed to parse; carries the byte offset (or line/column).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        offset_(0),
        line_(line),
        column_(column) {}

  std::size_t offset() const { return offset_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t offset_;
  std::size_t line_ = 0;
  std::size_t column_ = 0;
};

/// The exact search hit its configured position cap.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A strategy was consulted at a position it does not cover.
class IncompleteStrategyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dwlab
