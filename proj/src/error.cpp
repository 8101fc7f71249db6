#include "svi/error.hpp"

namespace svi {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::AsymmetryTooLarge: return "AsymmetryTooLarge";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotDifferentiable: return "NotDifferentiable";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::SupportTooLarge: return "SupportTooLarge";
    case ErrorCode::InvalidScheme: return "InvalidScheme";
    case ErrorCode::NotCocoercive: return "NotCocoercive";
    case ErrorCode::NotStronglyMonotone: return "NotStronglyMonotone";
    case ErrorCode::NoClosedForm: return "NoClosedForm";
    case ErrorCode::UnsupportedScheme: return "UnsupportedScheme";
    case ErrorCode::StepSizeOutOfRange: return "StepSizeOutOfRange";
    case ErrorCode::SwitchNotReached: return "SwitchNotReached";
    case ErrorCode::MissingSecondDraw: return "MissingSecondDraw";
    case ErrorCode::NoEquilibrium: return "NoEquilibrium";
    case ErrorCode::TooFewSeeds: return "TooFewSeeds";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

int exit_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonSquare:
    case ErrorCode::AsymmetryTooLarge:
    case ErrorCode::NoConvergence:
    case ErrorCode::Singular:
    case ErrorCode::NotDifferentiable:
    case ErrorCode::NotCocoercive:
    case ErrorCode::NotStronglyMonotone:
      return 3;
    default:
      return 2;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace svi
