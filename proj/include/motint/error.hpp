#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace motint {

/// Stable error identifiers. The CLI prints these names and maps them to exit codes.
enum class ErrorCode {
  ChiUndefined,
  NoLimit,
  DimensionUnsupported,
  InfiniteFibers,
  BudgetExceeded,
  Unstable,
  RealizationOnlyStrata,
  MissingN,
  StrataNotPartition,
  InvalidArgument,
  ParseError,
  ValidationError,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Syntax error in textual input. Line and column are 1-based; line 0 means
/// a free-standing literal with no enclosing file.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(ErrorCode::ParseError, format(line, column, message)),
        line_(line), column_(column), detail_(message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string format(std::size_t line, std::size_t column, const std::string& message) {
    if (line == 0) return "column " + std::to_string(column) + ": " + message;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

}  // namespace motint
