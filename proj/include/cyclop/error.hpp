#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cyclop {

enum class ErrorCode {
  DuplicateOverride,
  CompositeBase,
  CompositeSubstitution,
  RuleIsSubst,
  RuleDisabled,
  MalformedInstance,
  UnknownPredicate,
  InvalidRule,
  BudMismatch,
  DanglingCompanion,
  TooLarge,
  RuleSetTooWeak,
  DepthCapExceeded,
  NoRepeatFound,
  InvalidInput,
  SyntaxError,
  ArityError,
  UnresolvedReference,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failures always carry a 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, std::size_t column, const std::string& message)
      : Error(code, std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

}  // namespace cyclop
