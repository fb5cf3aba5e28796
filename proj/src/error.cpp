#include "bess/error.hpp"

namespace bess {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NegativeAncillaryPrice: return "NegativeAncillaryPrice";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::DivisionByZeroMileage: return "DivisionByZeroMileage";
    case ErrorCode::SpanMismatch: return "SpanMismatch";
    case ErrorCode::SocOutOfRange: return "SocOutOfRange";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::MissingData: return "MissingData";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::WrongCount: return "WrongCount";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::EmptyLedger: return "EmptyLedger";
    case ErrorCode::ZeroEnergy: return "ZeroEnergy";
    case ErrorCode::ObjectiveMismatch: return "ObjectiveMismatch";
    case ErrorCode::InfeasibleParams: return "InfeasibleParams";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::NoRootInBracket: return "NoRootInBracket";
    case ErrorCode::NeverDies: return "NeverDies";
  }
  return "Unknown";
}

bool is_outcome_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InfeasibleParams:
    case ErrorCode::Infeasible:
    case ErrorCode::Unbounded:
    case ErrorCode::NoRoot:
    case ErrorCode::NoSignChange:
    case ErrorCode::NoRootInBracket:
    case ErrorCode::NeverDies:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace bess
