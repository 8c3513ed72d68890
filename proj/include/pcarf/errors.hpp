#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcarf {

// Malformed or unreadable input data (CSV cells, model files, ROC files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Experiment configuration problems. line() is 0 when not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A numerical routine failed to converge or produced non-finite output.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pcarf
