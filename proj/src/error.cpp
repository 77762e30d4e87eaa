#include "cpr/error.hpp"

namespace cpr {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::Io: return "Io";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::NotRealFrame: return "NotRealFrame";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NoKernel: return "NoKernel";
    case ErrorCode::IndefinitenessViolation: return "IndefinitenessViolation";
    case ErrorCode::DefiniteInput: return "DefiniteInput";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::Underdetermined: return "Underdetermined";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPSD:
    case ErrorCode::NoKernel:
    case ErrorCode::IndefinitenessViolation:
    case ErrorCode::DefiniteInput:
    case ErrorCode::WrongDimension:
    case ErrorCode::Underdetermined:
      return true;
    default:
      return false;
  }
}

}  // namespace cpr
