#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qsense {

/// Inconsistent arguments (dimension mismatch, index out of range, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition on operator structure was violated.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class SelectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SectorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qsense
