#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace baitpress {

// Exception hierarchy. The CLI maps each class onto a stable exit code.

/// Bad or unreadable input data (exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed line in a line-delimited JSON file. `line()` is 1-based.
class ParseError : public InputError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Model directory written by an incompatible build or preprocessing setup (exit code 3).
class CompatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two files that should describe the same posts do not (exit code 4).
class MismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace baitpress
