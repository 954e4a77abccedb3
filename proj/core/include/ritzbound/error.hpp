#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ritzbound {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (shape, finiteness, orthonormality).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Raised by orth() when a column is numerically dependent on its predecessors.
class RankDeficientError : public Error {
public:
  RankDeficientError(std::size_t column, const std::string &what)
      : Error(what), column_(column) {}

  /// Zero-based index of the first dependent column.
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
  std::size_t column_;
};

} // namespace ritzbound
