#include "phlab/error.hpp"

namespace phlab {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::RootNotConverged: return "RootNotConverged";
    case ErrorCode::NotAFixedPoint: return "NotAFixedPoint";
    case ErrorCode::SpectrumViolation: return "SpectrumViolation";
    case ErrorCode::NonSimpleSpectrum: return "NonSimpleSpectrum";
    case ErrorCode::BranchExplosion: return "BranchExplosion";
    case ErrorCode::DepthMismatch: return "DepthMismatch";
    case ErrorCode::InsufficientDepth: return "InsufficientDepth";
    case ErrorCode::DepthTooSmall: return "DepthTooSmall";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::IllConditionedIntersection: return "IllConditionedIntersection";
    case ErrorCode::NoCenterDirection: return "NoCenterDirection";
    case ErrorCode::NoStableDirection: return "NoStableDirection";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotSeparated: return "NotSeparated";
    case ErrorCode::ResamplingOverflow: return "ResamplingOverflow";
    case ErrorCode::ConsistencyViolation: return "ConsistencyViolation";
    case ErrorCode::EmptyCollection: return "EmptyCollection";
    case ErrorCode::NoGoodSegments: return "NoGoodSegments";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::DepthExhausted: return "DepthExhausted";
    case ErrorCode::NotGood: return "NotGood";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

bool is_config_error(ErrorCode code) {
  return code == ErrorCode::InvalidArgument || code == ErrorCode::ConfigError ||
         code == ErrorCode::NotAFixedPoint || code == ErrorCode::SpectrumViolation;
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace phlab
