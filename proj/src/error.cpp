#include "lsg/error.hpp"

namespace lsg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::UnsupportedRootSystem: return "UnsupportedRootSystem";
    case ErrorCode::DimensionError: return "DimensionError";
    case ErrorCode::InvalidTime: return "InvalidTime";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnsupportedExponent: return "UnsupportedExponent";
    case ErrorCode::InsufficientTimes: return "InsufficientTimes";
    case ErrorCode::ClosureOverflow: return "ClosureOverflow";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::SingularSpectralParameter: return "SingularSpectralParameter";
    case ErrorCode::ChamberWallEvaluation: return "ChamberWallEvaluation";
    case ErrorCode::UnderResolvedPhase: return "UnderResolvedPhase";
    case ErrorCode::CalibrationFailure: return "CalibrationFailure";
    case ErrorCode::ForcingNotAntisymmetrizable: return "ForcingNotAntisymmetrizable";
    case ErrorCode::InsufficientDecaySamples: return "InsufficientDecaySamples";
    case ErrorCode::NotGaussianDecay: return "NotGaussianDecay";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::EvaluationAtSingularity: return "EvaluationAtSingularity";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::UnsupportedRootSystem:
    case ErrorCode::DimensionError:
    case ErrorCode::InvalidTime:
    case ErrorCode::InvalidArgument:
    case ErrorCode::UnsupportedExponent:
    case ErrorCode::InsufficientTimes:
      return 2;
    case ErrorCode::InvariantViolation:
      return 4;
    default:
      return 3;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace lsg
