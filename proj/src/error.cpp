#include "motint/error.hpp"

namespace motint {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ChiUndefined: return "ChiUndefined";
    case ErrorCode::NoLimit: return "NoLimit";
    case ErrorCode::DimensionUnsupported: return "DimensionUnsupported";
    case ErrorCode::InfiniteFibers: return "InfiniteFibers";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::RealizationOnlyStrata: return "RealizationOnlyStrata";
    case ErrorCode::MissingN: return "MissingN";
    case ErrorCode::StrataNotPartition: return "StrataNotPartition";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace motint
