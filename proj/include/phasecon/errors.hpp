#pragma once

#include <stdexcept>
#include <string>

namespace phasecon {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

class VarianceMismatch : public Error {
 public:
  using Error::Error;
};

class SymmetryViolation : public Error {
 public:
  using Error::Error;
};

class SingularMetric : public Error {
 public:
  using Error::Error;
};

/// Event rejected by a DomainGuard; what() carries the guard's reason.
class OutsideDomain : public Error {
 public:
  using Error::Error;
};

class MalformedFaraday : public Error {
 public:
  using Error::Error;
};

class InvalidParticle : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

/// Adaptive integration could not meet its tolerance at the minimum step.
class StepRejected : public Error {
 public:
  using Error::Error;
};

class NonMonotoneTime : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& key, const std::string& message)
      : Error("line " + std::to_string(line) + (key.empty() ? "" : " [" + key + "]") +
              ": " + message),
        line_(line),
        key_(key) {}

  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IncompatibleChecker : public Error {
 public:
  using Error::Error;
};

}  // namespace phasecon
