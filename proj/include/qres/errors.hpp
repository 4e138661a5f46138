#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qres {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed model or elements document.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A loaded or constructed record violates one of its invariants.
class InvariantError : public Error {
 public:
  InvariantError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Bad argument to an operation (index out of range, d = 0 where forbidden...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Vertex enumeration or grid scan too large.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Operation only defined for the loss of a single actuator column.
class UnsupportedLossError : public Error {
 public:
  using Error::Error;
};

// Orbital elements outside the domain where the variational matrix exists.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Simulated trajectory did not reach its target within the horizon.
class NonReachError : public Error {
 public:
  NonReachError(const std::string& what, double horizon)
      : Error(what), horizon_(horizon) {}

  double horizon() const noexcept { return horizon_; }

 private:
  double horizon_;
};

}  // namespace qres
