#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csuq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or dimensions do not agree (or a dimension is zero where it must not be).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar argument lies outside its admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A request would exceed a configured size cap (dense oracle, RIP enumeration).
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared during an iterative computation.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, std::size_t iteration)
      : Error(what + " (iteration " + std::to_string(iteration) + ")"), iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

/// Cross validation could not produce a single finite score.
class SelectionError : public Error {
 public:
  using Error::Error;
};

/// File input/output failure; the message names the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace csuq
