#pragma once

#include <stdexcept>
#include <string>

namespace qpl {

/// Failure categories. The CLI maps each one onto a process exit code.
enum class ErrorCode {
  BadParamShape,
  InvarianceViolated,
  PoleAtT,
  IdentityFailed,
  GaugeNotScalar,
  NotInSpan,
  EliminationSingular,
  SingularPoint,
  SingularityInInterval,
  StepUnderflow,
  NoConvergentContour,
  NotConverged,
  BudgetExceeded,
  ParseError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadParamShape: return "BadParamShape";
    case ErrorCode::InvarianceViolated: return "InvarianceViolated";
    case ErrorCode::PoleAtT: return "PoleAtT";
    case ErrorCode::IdentityFailed: return "IdentityFailed";
    case ErrorCode::GaugeNotScalar: return "GaugeNotScalar";
    case ErrorCode::NotInSpan: return "NotInSpan";
    case ErrorCode::EliminationSingular: return "EliminationSingular";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::SingularityInInterval: return "SingularityInInterval";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::NoConvergentContour: return "NoConvergentContour";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qpl
