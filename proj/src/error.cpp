#include "geoimpute/error.hpp"

namespace geoimpute {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::DuplicatePoint: return "DuplicatePoint";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::NonPositiveExpectedDensity: return "NonPositiveExpectedDensity";
    case ErrorCode::MuOutOfRange: return "MuOutOfRange";
    case ErrorCode::InvalidLevels: return "InvalidLevels";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::FractionOutOfRange: return "FractionOutOfRange";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::HeaderMissingField: return "HeaderMissingField";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::KTooLarge:
    case ErrorCode::MuOutOfRange:
    case ErrorCode::InvalidLevels:
    case ErrorCode::FractionOutOfRange:
    case ErrorCode::UnknownKind:
    case ErrorCode::InvalidArgument:
      return ErrorCategory::Usage;
    case ErrorCode::SingularSystem:
    case ErrorCode::NonPositiveExpectedDensity:
      return ErrorCategory::Numerical;
    default:
      return ErrorCategory::Data;
  }
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : Error(ErrorCode::ParseError,
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

}  // namespace geoimpute
