#include "idi/errors.hpp"

namespace idi {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UndefinedPhase: return "UndefinedPhase";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::MagnitudeTooSmall: return "MagnitudeTooSmall";
    case ErrorCode::CosOutOfRange: return "CosOutOfRange";
    case ErrorCode::ContradictoryMeasurements: return "ContradictoryMeasurements";
    case ErrorCode::InsufficientCoverage: return "InsufficientCoverage";
    case ErrorCode::BranchLimitExceeded: return "BranchLimitExceeded";
    case ErrorCode::AllHypothesesPruned: return "AllHypothesesPruned";
    case ErrorCode::OracleTooLarge: return "OracleTooLarge";
    case ErrorCode::ImaginaryResidue: return "ImaginaryResidue";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace idi
