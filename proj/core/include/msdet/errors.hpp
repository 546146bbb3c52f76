#pragma once

#include <stdexcept>
#include <string>

namespace msdet {

/// Invalid user-supplied data or arguments. The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Input text that failed to parse. Locations are 1-based; column 0 means
/// "whole line".
class ParseError : public InputError {
public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
      : InputError(locate(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  static std::string locate(const std::string& what, std::size_t line, std::size_t column) {
    std::string s = "line " + std::to_string(line);
    if (column > 0) s += ", column " + std::to_string(column);
    return s + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

}  // namespace msdet
