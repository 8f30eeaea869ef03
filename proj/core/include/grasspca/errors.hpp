#pragma once

#include <stdexcept>
#include <string>

namespace grasspca {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Shape or size mismatch between operands.
class DimensionError : public Error {
public:
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// Argument outside its admissible range (negative variance, non-finite
/// entries, zero SNR, ...).
class InvalidInputError : public Error {
public:
  explicit InvalidInputError(const std::string& msg) : Error(msg) {}
};

/// Numerically degenerate input: rank deficiency, vanishing spectral gap.
/// Carries the offending scale (e.g. the smallest singular value).
class DegenerateInputError : public Error {
public:
  DegenerateInputError(const std::string& msg, double detail)
      : Error(msg), detail_(detail) {}
  double detail() const { return detail_; }

private:
  double detail_ = 0.0;
};

/// Inconsistent system configuration (antenna counts, SNR grids, ...).
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace grasspca
