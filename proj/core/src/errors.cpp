#include "simplexdyn/errors.hpp"

namespace simplexdyn {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveEntry: return "NonPositiveEntry";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BoundaryProximity: return "BoundaryProximity";
    case ErrorCode::BadDimension: return "BadDimension";
    case ErrorCode::BadValue: return "BadValue";
    case ErrorCode::LambdaZero: return "LambdaZero";
    case ErrorCode::LambdaNonzero: return "LambdaNonzero";
    case ErrorCode::NotNash: return "NotNash";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::NonpositiveTime: return "NonpositiveTime";
    case ErrorCode::StepVsCorrelation: return "StepVsCorrelation";
    case ErrorCode::WalkTooShort: return "WalkTooShort";
    case ErrorCode::BadStepLaw: return "BadStepLaw";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::NonMonotone: return "NonMonotone";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotGaussian: return "NotGaussian";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace simplexdyn
