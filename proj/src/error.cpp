#include "inputsafe/error.hpp"

namespace inputsafe {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::EvalError: return "EvalError";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DegenerateBound: return "DegenerateBound";
    case ErrorCode::InitialUnsafe: return "InitialUnsafe";
    case ErrorCode::SingularInput: return "SingularInput";
    case ErrorCode::NumericalBlowup: return "NumericalBlowup";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

}  // namespace inputsafe
