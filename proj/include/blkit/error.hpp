#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blkit {

enum class ErrorCode {
  DimensionMismatch,
  NotSurjective,
  ExponentOutOfRange,
  SingularDenominator,
  NotPositiveDefinite,
  NotSymmetric,
  SubsetBudgetExceeded,
  DegenerateLP,
  NotInterior,
  NonConvergence,
  DeltaOutOfRange,
  ExpansionBudgetExceeded,
  FactorNotSurjective,
  ExponentsNotYoung,
  RankDeficientParametrization,
  QuadratureBudgetExceeded,
  ErrorEstimateTooLarge,
  NotFinite,
  InvalidInput,
};

// Input errors are problems with what the caller supplied; everything else is
// a numerical failure. The CLI maps the two groups to different exit codes.
inline bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NotSurjective:
    case ErrorCode::ExponentOutOfRange:
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::NotSymmetric:
    case ErrorCode::SubsetBudgetExceeded:
    case ErrorCode::DeltaOutOfRange:
    case ErrorCode::ExpansionBudgetExceeded:
    case ErrorCode::FactorNotSurjective:
    case ErrorCode::ExponentsNotYoung:
    case ErrorCode::RankDeficientParametrization:
    case ErrorCode::InvalidInput:
      return true;
    default:
      return false;
  }
}

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace blkit
