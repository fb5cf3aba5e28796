#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bess {

enum class ErrorCode {
  // input validation
  MalformedFile,
  NonFiniteValue,
  NegativeAncillaryPrice,
  InvalidArgument,
  InvalidConfig,
  TooShort,
  DivisionByZeroMileage,
  SpanMismatch,
  SocOutOfRange,
  DomainError,
  MissingData,
  EmptyInput,
  KTooLarge,
  WrongCount,
  CountMismatch,
  EmptyLedger,
  ZeroEnergy,
  ObjectiveMismatch,
  // outcome errors
  InfeasibleParams,
  Infeasible,
  Unbounded,
  NoRoot,
  NoSignChange,
  NoRootInBracket,
  NeverDies,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for errors describing an optimisation or root-finding outcome rather
/// than bad input. The CLI maps these to exit code 2.
bool is_outcome_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bess
