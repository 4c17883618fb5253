#pragma once

#include <stdexcept>
#include <string>

namespace causid {

enum class ErrorCode {
  CycleError,
  UnknownNode,
  SelfLoop,
  DuplicateNode,
  InvalidArgument,
  NotMarkovian,
  NotAComponent,
  DegenerateQuery,
  DegenerateContrast,
  InconsistentQuery,
  BadAdjustmentSet,
  ZeroEvidence,
  DomainTooLarge,
  FreeVariableUnbound,
  ContainsDoTerm,
  InvalidModel,
  ParseError,
  UnknownSubcommand,
  MissingFlag,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_name(code)) + ": " + msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : Error(ErrorCode::ParseError,
              msg + " (line " + std::to_string(line) + ", column " + std::to_string(col) + ")"),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int column() const { return col_; }

 private:
  int line_;
  int col_;
};

}  // namespace causid
