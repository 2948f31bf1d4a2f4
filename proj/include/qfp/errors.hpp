#pragma once

#include <stdexcept>
#include <string>

namespace qfp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or size mismatch between operands (a caller bug or malformed input).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed interchange document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A mathematical precondition does not hold (invalid embedding, promise
/// matrix handed to a spectral bound, parameter out of range, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An iterative method hit its iteration cap. Carries the best estimate seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_estimate)
      : Error(what), best_estimate_(best_estimate) {}
  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

/// Randomized procedure failed on every seed it was allowed to try.
class RetriesExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace qfp
