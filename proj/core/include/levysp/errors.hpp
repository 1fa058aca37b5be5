#pragma once

#include <stdexcept>
#include <string>

namespace levysp {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates an operation's precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// The requested model or (model, period) combination is not implemented.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// No closed-form increment density exists for this (law, period).
class UnsupportedClosedFormError : public UnsupportedError {
 public:
  using UnsupportedError::UnsupportedError;
};

/// The MAP penalty is degenerate (increment law has an atom at zero).
class DegeneratePenaltyError : public UnsupportedError {
 public:
  using UnsupportedError::UnsupportedError;
};

/// A discretization grid is too coarse or too narrow for the requested accuracy.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Iterative or numerical failure (singular system, non-finite values).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration; carries the offending key.
class ConfigError : public ArgumentError {
 public:
  ConfigError(std::string key, const std::string& what)
      : ArgumentError(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace levysp
