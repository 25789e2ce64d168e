#pragma once

#include <stdexcept>
#include <string>

namespace idi {

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  IndexOutOfRange,
  UndefinedPhase,
  DegenerateInput,
  OutOfRange,
  MagnitudeTooSmall,
  CosOutOfRange,
  ContradictoryMeasurements,
  InsufficientCoverage,
  BranchLimitExceeded,
  AllHypothesesPruned,
  OracleTooLarge,
  ImaginaryResidue,
  InvalidConfig,
  Io,
};

const char* to_string(ErrorCode code);

/// Library-wide exception. The code is what callers branch on; the message is
/// for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace idi
