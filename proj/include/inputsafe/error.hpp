#pragma once

#include <stdexcept>
#include <string>

namespace inputsafe {

enum class ErrorCode {
  NotFound,
  ParseError,
  InvalidScenario,
  EvalError,
  DomainError,
  DegenerateBound,
  InitialUnsafe,
  SingularInput,
  NumericalBlowup,
};

const char* to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  // Message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace inputsafe
