#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sispace {

/// Malformed or inconsistent user configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric precondition of an operation does not hold (CLI exit code 3).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The frequency grid cannot hold every block of a generator with the
/// required margin.
class GridTooSmallError : public PreconditionError {
 public:
  GridTooSmallError(const std::string& what, std::int64_t required_half_range)
      : PreconditionError(what), required_half_range_(required_half_range) {}

  std::int64_t required_half_range() const noexcept { return required_half_range_; }

 private:
  std::int64_t required_half_range_;
};

/// File could not be read or written (CLI exit code 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sispace
