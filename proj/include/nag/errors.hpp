#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nag {

/// Base class for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
  /// Numerical failures map to CLI exit code 2, everything else to 1.
  virtual bool numerical() const noexcept { return false; }
};

#define NAG_DEFINE_ERROR(Name, Numerical)                              \
  class Name : public Error {                                          \
   public:                                                             \
    using Error::Error;                                                \
    const char* kind() const noexcept override { return #Name; }       \
    bool numerical() const noexcept override { return Numerical; }     \
  };

NAG_DEFINE_ERROR(SingularMatrix, true)
NAG_DEFINE_ERROR(DimensionMismatch, false)
NAG_DEFINE_ERROR(NotSquare, false)
NAG_DEFINE_ERROR(NotHomogeneous, false)
NAG_DEFINE_ERROR(InvalidSystem, false)
NAG_DEFINE_ERROR(StartPointInvalid, true)
NAG_DEFINE_ERROR(RefinementDiverged, true)
NAG_DEFINE_ERROR(PathFailure, true)
NAG_DEFINE_ERROR(DecompositionIncomplete, true)
NAG_DEFINE_ERROR(DimensionOutOfRange, false)
NAG_DEFINE_ERROR(SchemaVersionMismatch, false)
NAG_DEFINE_ERROR(CorruptFile, false)
NAG_DEFINE_ERROR(UsageError, false)

#undef NAG_DEFINE_ERROR

/// Syntax or semantic error in problem text, with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t line, std::size_t column, std::string token)
      : Error(format(message, line, column, token)),
        message_(std::move(message)),
        line_(line),
        column_(column),
        token_(std::move(token)) {}

  const char* kind() const noexcept override { return "ParseError"; }
  const std::string& message() const noexcept { return message_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }

 private:
  static std::string format(const std::string& msg, std::size_t line, std::size_t col,
                            const std::string& tok) {
    std::string s = std::to_string(line) + ":" + std::to_string(col) + ": " + msg;
    if (!tok.empty()) s += " near '" + tok + "'";
    return s;
  }

  std::string message_;
  std::size_t line_;
  std::size_t column_;
  std::string token_;
};

class DuplicateName : public ParseError {
 public:
  using ParseError::ParseError;
  const char* kind() const noexcept override { return "DuplicateName"; }
};

class UndeclaredIdentifier : public ParseError {
 public:
  using ParseError::ParseError;
  const char* kind() const noexcept override { return "UndeclaredIdentifier"; }
};

}  // namespace nag
