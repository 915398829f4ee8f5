#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace asgmig {

enum class ErrorCode {
  UnknownParent,
  UnknownNode,
  UnknownModel,
  UnknownPath,
  UnknownContext,
  UnknownRule,
  ForeignNotDeclaration,
  ParseError,
  NotExportable,
  NoRuleFound,
  ScopeModelMismatch,
  InvalidMapping,
  DuplicateMember,
  ChooserRequired,
  ChoiceAbandoned,
  RuleApplicationFailed,
  NotTopOfStack,
  PreconditionFailed,
  ScriptError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. The code is the stable name surfaced
/// to scripts and the HTTP API.
class MigrationError : public std::runtime_error {
 public:
  MigrationError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public MigrationError {
 public:
  ParseError(const std::string& message, int line, int column)
      : MigrationError(ErrorCode::ParseError,
                       std::to_string(line) + ":" + std::to_string(column) +
                           ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace asgmig
