#ifndef MESOCAT_ERRORS_HPP
#define MESOCAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mesocat {

/// Base class for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The superposition has (numerically) zero norm: its components cancel.
class DegenerateState : public Error {
 public:
  using Error::Error;
};

/// Physical parameters fall outside the validity window of the effective model.
class RegimeViolation : public Error {
 public:
  using Error::Error;
};

/// Truncated Fock space is too small for the requested state or evolution.
class CutoffTooSmall : public Error {
 public:
  using Error::Error;
};

/// A qubit measurement outcome with vanishing probability was requested.
class ZeroProbabilityOutcome : public Error {
 public:
  using Error::Error;
};

/// Missing or contradictory experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mesocat

#endif  // MESOCAT_ERRORS_HPP
