#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace moagg {

// Malformed input to an operation (dimension mismatch, out-of-range index).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The operation is well defined, but not for this game shape
// (e.g. satisficing on three objectives, Stackelberg on three players).
class UnsupportedConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model needs data the game does not carry (e.g. rule actions).
class InvalidConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoSolution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dataset parse/validation failure, tagged with the 1-based line number.
class DatasetError : public std::runtime_error {
 public:
  DatasetError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace moagg
