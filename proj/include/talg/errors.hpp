#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace talg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched t-scalar shapes or array lengths.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Bad matrix dimensions, zero-sized modes, non-square input to trace, ...
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain (e.g. root of a non-nonnegative value).
class DomainError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class SingularError : public Error {
 public:
  SingularError(const std::string& what, std::vector<std::size_t> dead)
      : Error(what), dead_slices_(std::move(dead)) {}
  const std::vector<std::size_t>& dead_slices() const noexcept { return dead_slices_; }

 private:
  std::vector<std::size_t> dead_slices_;
};

class RankTooLargeError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Non-finite values or a failed decomposition.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Malformed or truncated files, bad command-line values.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace talg
