#pragma once

#include <stdexcept>
#include <string>

namespace pathqv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent configuration: mismatched horizons, unknown names, missing pieces.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The model lacks a capability an operation needs (e.g. a closed-form compensator).
class UnsupportedModelError : public Error {
 public:
  using Error::Error;
};

/// A request exceeds the supported resource envelope (grid size, replica count).
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

[[noreturn]] void throw_domain(const std::string& what);
[[noreturn]] void throw_config(const std::string& what);

}  // namespace pathqv
