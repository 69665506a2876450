#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gna {

// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input. line and column are 1-based; column 0 means "whole line".
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& what);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

// Training produced a non-finite loss.
class DivergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace gna
