#include "causal_econf/error.hpp"

namespace causal_econf {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveEntry: return "NonPositiveEntry";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::EmptyAxis: return "EmptyAxis";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::StrategyRangeError: return "StrategyRangeError";
    case ErrorCode::NonPositiveC: return "NonPositiveC";
    case ErrorCode::NonPositiveF: return "NonPositiveF";
    case ErrorCode::NonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotDegenerate: return "NotDegenerate";
    case ErrorCode::NotRational: return "NotRational";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace causal_econf
