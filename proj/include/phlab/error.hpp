// Error codes shared by the C++ core, the C API and the CLI.
#pragma once

#include <stdexcept>
#include <string>

namespace phlab {

// Values are part of the C ABI (see phlab.h); append only.
enum class ErrorCode : int {
  Ok = 0,
  InvalidArgument = 1,
  ConfigError = 2,
  RootNotConverged = 3,
  NotAFixedPoint = 4,
  SpectrumViolation = 5,
  NonSimpleSpectrum = 6,
  BranchExplosion = 7,
  DepthMismatch = 8,
  InsufficientDepth = 9,
  DepthTooSmall = 10,
  SingularJacobian = 11,
  IllConditionedIntersection = 12,
  NoCenterDirection = 13,
  NoStableDirection = 14,
  BudgetExceeded = 15,
  NotSeparated = 16,
  ResamplingOverflow = 17,
  ConsistencyViolation = 18,
  EmptyCollection = 19,
  NoGoodSegments = 20,
  NoIntersection = 21,
  DepthExhausted = 22,
  NotGood = 23,
  Internal = 24,
};

const char* error_name(ErrorCode code);

// Config and argument problems map to CLI exit 2, everything else to exit 3.
bool is_config_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace phlab
