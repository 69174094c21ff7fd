#pragma once

#include <stdexcept>
#include <string>

namespace nlb {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidKernel : public Error {
 public:
  using Error::Error;
};

/// The kernel range is not an integer multiple of the cell width, or a road
/// length is not an integer number of cells.
class NonCommensurateGrid : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A requested time step exceeds the stability bound of the scheme.
class CflViolation : public Error {
 public:
  CflViolation(double dt, double bound)
      : Error("time step " + std::to_string(dt) +
              " exceeds the CFL bound " + std::to_string(bound)),
        dt_(dt),
        bound_(bound) {}

  double dt() const noexcept { return dt_; }
  double bound() const noexcept { return bound_; }

 private:
  double dt_;
  double bound_;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

/// Parameters fall outside the regimes an exact solution is available for.
class UnsupportedRegime : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A scenario value violates an invariant. `key()` is the dotted path of the
/// offending entry, e.g. "kernel.eta".
class ValidationError : public Error {
 public:
  ValidationError(std::string key, const std::string& what)
      : Error(key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace nlb
