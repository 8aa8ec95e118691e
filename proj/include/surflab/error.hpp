#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace surflab {

enum class ErrorCode {
  InvalidParam,
  CapExceeded,
  ShapeMismatch,
  TailTooLarge,
  NoConvergence,
  IncompatibleRef,
  FactorizationBreakdown,
  DenominatorNonpositive,
  ZeroVector,
  HypothesisViolated,
  GramDegenerate,
  NotPositive,
  NearDegenerate,
  DivisionUnderflow,
  S4Violated,
  InequalityViolated,
  TooFewPoints,
  GapTooSmall,
  ProfileUnderflow,
  AllZeroOrOne,
  DenseCapExceeded,
  ConfigInvalid,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TailTooLarge: return "TailTooLarge";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::IncompatibleRef: return "IncompatibleRef";
    case ErrorCode::FactorizationBreakdown: return "FactorizationBreakdown";
    case ErrorCode::DenominatorNonpositive: return "DenominatorNonpositive";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::GramDegenerate: return "GramDegenerate";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NearDegenerate: return "NearDegenerate";
    case ErrorCode::DivisionUnderflow: return "DivisionUnderflow";
    case ErrorCode::S4Violated: return "S4Violated";
    case ErrorCode::InequalityViolated: return "InequalityViolated";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::GapTooSmall: return "GapTooSmall";
    case ErrorCode::ProfileUnderflow: return "ProfileUnderflow";
    case ErrorCode::AllZeroOrOne: return "AllZeroOrOne";
    case ErrorCode::DenseCapExceeded: return "DenseCapExceeded";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

}  // namespace surflab
