#include "storalyze/error.hpp"

namespace storalyze {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonUniformSpacing: return "NonUniformSpacing";
    case ErrorCode::TooManyGaps: return "TooManyGaps";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::MisalignedSeries: return "MisalignedSeries";
    case ErrorCode::UnknownTechnology: return "UnknownTechnology";
    case ErrorCode::NegativeCost: return "NegativeCost";
    case ErrorCode::YearOutOfRange: return "YearOutOfRange";
    case ErrorCode::IncompleteCostData: return "IncompleteCostData";
    case ErrorCode::NonPositiveScale: return "NonPositiveScale";
    case ErrorCode::InvalidLifetime: return "InvalidLifetime";
    case ErrorCode::ConservationViolation: return "ConservationViolation";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::ZeroDischarge: return "ZeroDischarge";
    case ErrorCode::NoCycles: return "NoCycles";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ZeroGasUse: return "ZeroGasUse";
    case ErrorCode::BudgetOutOfRange: return "BudgetOutOfRange";
    case ErrorCode::NonIdentifiable: return "NonIdentifiable";
  }
  return "Unknown";
}

bool is_undefined_result(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroDischarge:
    case ErrorCode::NoCycles:
    case ErrorCode::EmptyInput:
    case ErrorCode::ZeroGasUse:
    case ErrorCode::BudgetOutOfRange:
    case ErrorCode::NonIdentifiable:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace storalyze
