#pragma once

#include <stdexcept>
#include <string>

namespace dwdual {

enum class ErrorKind {
  Domain,             // argument outside the mathematical domain
  DegenerateLoad,     // zero load where a nonzero one is required
  MalformedLoad,      // tabulated samples out of order or out of range
  NegativeAmplitude,  // |sigma|^2 < 0 passed to the cubic solver
  AmplitudeOverflow,  // F^2 r^2 reached the critical amplitude inside the annulus
  Uncertified,        // a field was used before its invariants were certified
  NoGapViolation,     // primal and dual energies disagree beyond tolerance
  NumericalFailure,   // eigen-solver or iteration did not converge
  Config,             // run configuration could not be parsed or validated
  LoadHypothesis,     // load violates balance / single zero / L1 bound
  Internal,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace dwdual
