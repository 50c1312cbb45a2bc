#pragma once

#include <stdexcept>
#include <string>

namespace homsim {

/// Invalid configuration or parameters. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside an operation's mathematical domain (non-finite input,
/// negative index, reflectivity >= 1).
class DomainError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Frequency grid too coarse for the spectral structure it must sample.
class ResolutionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Config text that cannot be parsed. Carries the offending line (1-based, 0
/// when not applicable).
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, int line)
      : ConfigError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A computed quantity violated an invariant of the integral (Hermiticity,
/// non-negativity). Maps to CLI exit code 2.
class NumericalConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File system failure. Maps to CLI exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace homsim
