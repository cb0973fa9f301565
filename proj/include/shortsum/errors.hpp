#pragma once

#include <stdexcept>
#include <string>

namespace shortsum {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A request exceeds a configured size cap (sieve limit, grid size, ...).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed or incompatible on-disk data.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Too few usable data points for a statistical fit.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Quadrature refinement did not settle within the configured depth.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double coarse, double fine)
      : Error(what), coarse_(coarse), fine_(fine) {}

  double coarse() const noexcept { return coarse_; }
  double fine() const noexcept { return fine_; }

 private:
  double coarse_;
  double fine_;
};

}  // namespace shortsum
