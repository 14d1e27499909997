#pragma once

#include <stdexcept>
#include <string>

namespace mrt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Sequence or grid too short / mismatched.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Inconsistent configuration (e.g. beta not on the 2*lambda grid).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A sampling condition needed by a formula does not hold (T*Omega*e >= 1).
class ConditionError : public Error {
 public:
  using Error::Error;
};

// Left margin K' too small for compact-exceedance recovery. Recoverable:
// retry with a larger K' or a higher order.
class MarginError : public Error {
 public:
  MarginError(const std::string& what, long long required)
      : Error(what), required_(required) {}
  long long required() const noexcept { return required_; }

 private:
  long long required_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace mrt
