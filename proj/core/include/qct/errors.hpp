#pragma once

#include <stdexcept>
#include <string>

namespace qct {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction would exceed the desk-scale qubit cap.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, int required_qubits, int cap)
      : Error(what + ": needs " + std::to_string(required_qubits) +
              " qubits, cap is " + std::to_string(cap)),
        required_qubits_(required_qubits),
        cap_(cap) {}

  int required_qubits() const noexcept { return required_qubits_; }
  int cap() const noexcept { return cap_; }

 private:
  int required_qubits_;
  int cap_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Hermiticity, normalization or positivity violated beyond tolerance.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// Non-finite input to a numerical routine.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Argument outside its documented domain (key out of range, p outside [0,1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed document; `path()` names the offending line or field.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, const std::string& message)
      : Error(path + ": " + message), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class UnsupportedGateError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Exact key enumeration was requested beyond the enumeration budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// A certification routine was called on the wrong side of its promise.
class WrongSideError : public Error {
 public:
  using Error::Error;
};

}  // namespace qct
