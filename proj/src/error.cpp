#include "spiral/error.hpp"

namespace spiral {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::CandidateBudgetExceeded: return "CandidateBudgetExceeded";
    case ErrorCode::AcceptanceFailure: return "AcceptanceFailure";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DegenerateRational: return "DegenerateRational";
    case ErrorCode::UnboundedRegion: return "UnboundedRegion";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::EmptyDenominator: return "EmptyDenominator";
    case ErrorCode::IterationCapExceeded: return "IterationCapExceeded";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace spiral
