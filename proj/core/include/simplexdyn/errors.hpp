#pragma once

#include <stdexcept>
#include <string>

namespace simplexdyn {

enum class ErrorCode {
  NonPositiveEntry,
  DimensionMismatch,
  BoundaryProximity,
  BadDimension,
  BadValue,
  LambdaZero,
  LambdaNonzero,
  NotNash,
  TooLarge,
  WrongDimension,
  StepTooLarge,
  NonpositiveTime,
  StepVsCorrelation,
  WalkTooShort,
  BadStepLaw,
  TooFewSamples,
  GridMismatch,
  Empty,
  NonMonotone,
  SizeMismatch,
  NoConvergence,
  NotGaussian,
  Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace simplexdyn
