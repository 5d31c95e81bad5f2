#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ckf {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible, or an operation needs a square matrix.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class NotNonnegative : public Error {
 public:
  using Error::Error;
};

/// A zero row or zero column: the Cuntz-Krieger relations would force a
/// vanishing partial isometry.
class DegenerateRelations : public Error {
 public:
  using Error::Error;
};

/// |det| != 1 where an element of GL_n(Z) is required.
class NotUnimodular : public Error {
 public:
  using Error::Error;
};

/// A bounded search would have to materialize more candidates than allowed.
class SearchLimitExceeded : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  /// line is 1-based; 0 means the error is not tied to a line.
  explicit ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ckf
