#pragma once

#include <stdexcept>
#include <string>

namespace mrepi {

// Exception hierarchy. The CLI maps these onto its exit codes.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments, out-of-range values, unreadable or invalid files.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A metric (ASN, DDC) whose denominator vanishes for the given input.
class UndefinedMetricError : public InputError {
 public:
  using InputError::InputError;
};

/// A coupling target that cannot be reached with the requested layer specs.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// The mean small-outbreak size diverges at or above the epidemic threshold.
class SupercriticalError : public Error {
 public:
  using Error::Error;
};

}  // namespace mrepi
