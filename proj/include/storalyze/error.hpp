#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace storalyze {

enum class ErrorCode {
  // input data
  FileNotFound,
  ParseError,
  MissingColumn,
  NonUniformSpacing,
  TooManyGaps,
  NonFiniteValue,
  TooShort,
  InvalidValue,
  MisalignedSeries,
  // cost table
  UnknownTechnology,
  NegativeCost,
  YearOutOfRange,
  IncompleteCostData,
  // analysis
  NonPositiveScale,
  InvalidLifetime,
  ConservationViolation,
  OutOfDomain,
  // computation undefined
  ZeroDischarge,
  NoCycles,
  EmptyInput,
  ZeroGasUse,
  BudgetOutOfRange,
  NonIdentifiable,
};

std::string_view to_string(ErrorCode code);

/// True for codes that mean "inputs were fine but the quantity has no value".
bool is_undefined_result(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace storalyze
