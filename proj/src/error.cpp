#include "blkit/error.hpp"

namespace blkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSurjective: return "NotSurjective";
    case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::SubsetBudgetExceeded: return "SubsetBudgetExceeded";
    case ErrorCode::DegenerateLP: return "DegenerateLP";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorCode::ExpansionBudgetExceeded: return "ExpansionBudgetExceeded";
    case ErrorCode::FactorNotSurjective: return "FactorNotSurjective";
    case ErrorCode::ExponentsNotYoung: return "ExponentsNotYoung";
    case ErrorCode::RankDeficientParametrization: return "RankDeficientParametrization";
    case ErrorCode::QuadratureBudgetExceeded: return "QuadratureBudgetExceeded";
    case ErrorCode::ErrorEstimateTooLarge: return "ErrorEstimateTooLarge";
    case ErrorCode::NotFinite: return "NotFinite";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

}  // namespace blkit
