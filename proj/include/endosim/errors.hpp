#pragma once

#include <stdexcept>
#include <string>

namespace endosim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter block violates one of its invariants.
class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain an operation accepts.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// The strut cannot reach the requested configuration.
class GeometryInfeasible : public Error {
 public:
  using Error::Error;
};

/// The requested tip diameter lies outside the achievable range.
class UnreachableDiameter : public Error {
 public:
  using Error::Error;
};

/// The bellows cannot supply the requested strut force within the supply limit.
class ForceInfeasible : public Error {
 public:
  using Error::Error;
};

/// Scenario or dataset text could not be ingested.
///
/// Carries the offending key (may be empty) and 1-based line number (0 when
/// the problem is not tied to a line).
class ConfigError : public Error {
 public:
  ConfigError(std::string key, int line, const std::string& message)
      : Error(format(key, line, message)), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& key, int line, const std::string& message) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!key.empty()) out += "key `" + key + "`: ";
    return out + message;
  }

  std::string key_;
  int line_;
};

}  // namespace endosim
