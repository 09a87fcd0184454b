#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lsg {

enum class ErrorCode {
  // input / configuration
  ConfigError,
  UnsupportedRootSystem,
  DimensionError,
  InvalidTime,
  InvalidArgument,
  UnsupportedExponent,
  InsufficientTimes,
  // numerical failures
  ClosureOverflow,
  GridTooSmall,
  SingularSpectralParameter,
  ChamberWallEvaluation,
  UnderResolvedPhase,
  CalibrationFailure,
  ForcingNotAntisymmetrizable,
  InsufficientDecaySamples,
  NotGaussianDecay,
  QuadratureFailure,
  EvaluationAtSingularity,
  // a checked mathematical invariant did not hold
  InvariantViolation,
};

std::string_view to_string(ErrorCode code);

/// Process exit status for the command-line tool: 2 input, 3 numerical, 4 invariant.
int exit_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace lsg
