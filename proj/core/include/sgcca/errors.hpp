#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sgcca {

enum class ErrorCode {
  InvalidArgument,
  InfeasibleBudget,
  DegenerateInput,
  BranchConditionViolated,
  DimensionMismatch,
  DegenerateColumn,
  UnsupportedScheme,
  UnknownDesign,
  EmptyGrid,
  ParseError,
  IoError,
  ConfigError,
};

// Stable kebab-case identifier, e.g. "invalid-argument". The CLI prints it
// verbatim so scripts can match on it.
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace sgcca
