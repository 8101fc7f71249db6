#pragma once

#include <stdexcept>
#include <string>

namespace svi {

enum class ErrorCode {
  NonSquare,
  AsymmetryTooLarge,
  NoConvergence,
  Singular,
  IndexOutOfRange,
  DimensionMismatch,
  NotDifferentiable,
  Unsupported,
  SupportTooLarge,
  InvalidScheme,
  NotCocoercive,
  NotStronglyMonotone,
  NoClosedForm,
  UnsupportedScheme,
  StepSizeOutOfRange,
  SwitchNotReached,
  MissingSecondDraw,
  NoEquilibrium,
  TooFewSeeds,
  InvalidRange,
  InvalidConfig,
  IoError,
  ParseError,
};

const char* to_string(ErrorCode code) noexcept;

/// Process exit status for a failure of this kind: 2 for configuration
/// problems, 3 for numerical ones.
int exit_status(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace svi
