#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace derange {

/// Closure enumeration stopped because the group is larger than the configured cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::size_t reached, std::size_t cap)
      : std::runtime_error("order cap " + std::to_string(cap) + " exceeded (reached " +
                           std::to_string(reached) + " elements)"),
        reached_(reached),
        cap_(cap) {}

  std::size_t reached() const { return reached_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t reached_;
  std::size_t cap_;
};

/// Malformed group-spec input, with a 1-based location.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace derange
