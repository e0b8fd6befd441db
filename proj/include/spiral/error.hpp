#pragma once

#include <stdexcept>
#include <string>

namespace spiral {

enum class ErrorCode {
  InvalidArgument = 1,
  Config = 2,
  CandidateBudgetExceeded = 3,
  AcceptanceFailure = 4,
  ZeroVector = 5,
  DegenerateRational = 6,
  UnboundedRegion = 7,
  DivisionByZero = 8,
  EmptyDenominator = 9,
  IterationCapExceeded = 10,
  Internal = 11,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spiral
