#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmtda {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model or generator parameter is outside its valid range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is 1-based; 0 when the whole file is at fault.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An operation was called on inputs that violate its documented contract.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace mmtda
