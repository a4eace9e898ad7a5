#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace acsv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed polynomial or rational text. `position()` is a 0-based offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A precondition on the mathematical input failed (zero constant term,
/// forbidden beta, singular matrix, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A series box or oracle would exceed its configured size.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A hypothesis needed by the cone-point method fails.
class MethodInapplicable : public Error {
 public:
  using Error::Error;
};

/// The asymptotic formula has a Gamma pole in its denominator.
class DegenerateCase : public Error {
 public:
  using Error::Error;
};

}  // namespace acsv
