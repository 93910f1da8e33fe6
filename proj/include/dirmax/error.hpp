#pragma once

#include <stdexcept>
#include <string>

namespace dirmax {

/// Input data failed a structural check (e.g. a chain of sets that is not
/// lacunary at some rank). Distinct from std::invalid_argument, which is
/// reserved for malformed arguments.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Spectral convolution would drop more kernel mass than allowed.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double lost_fraction)
      : std::runtime_error(what), lost_fraction_(lost_fraction) {}
  double lost_fraction() const noexcept { return lost_fraction_; }

 private:
  double lost_fraction_;
};

/// Reading or writing a file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dirmax
