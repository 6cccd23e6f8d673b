#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geoimpute {

enum class ErrorCode {
  EmptyInput,
  NonFiniteValue,
  DuplicatePoint,
  KTooLarge,
  NonPositiveExpectedDensity,
  MuOutOfRange,
  InvalidLevels,
  SingularSystem,
  LengthMismatch,
  FractionOutOfRange,
  UnknownKind,
  ParseError,
  HeaderMissingField,
  CountMismatch,
  IoError,
  InvalidArgument,
};

/// Broad failure category; the CLI maps each one to an exit status.
enum class ErrorCategory { Usage, Data, Numerical };

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category_of(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

/// Raised while reading delimited or gridded text; carries 1-based positions.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace geoimpute
