#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace psga {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or an ill-formed instance.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Cost function queried outside its covered group sizes.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configured resource limit (e.g. enumeration cap) was hit.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised by solvers running with invariant verification enabled.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace psga
