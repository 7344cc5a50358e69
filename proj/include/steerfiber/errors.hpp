#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace steerfiber {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-supplied configuration (bad key, value out of range). The CLI
// maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A design or configuration that violates a model bound.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; carries the byte offset where parsing failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : Error(what + " (at byte " + std::to_string(byte_offset) + ")"),
        offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace steerfiber
