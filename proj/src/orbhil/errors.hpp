#pragma once

#include <stdexcept>
#include <string>

namespace orbhil {

enum class ErrorCode {
  InvalidArgument,
  Io,
  Parse,
  Validation,
  Connect,
  Protocol,
  OutOfWorkspace,
  Unreachable,
  LimitViolation,
  PlannerInfeasible,
  IntegrationFailure,
  ReplayMismatch,
  Internal,
};

const char* error_code_name(ErrorCode code);

// Single exception type for the whole core; the code survives across the
// C API boundary, the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Io: return "io";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::Connect: return "connect";
    case ErrorCode::Protocol: return "protocol";
    case ErrorCode::OutOfWorkspace: return "out-of-workspace";
    case ErrorCode::Unreachable: return "unreachable";
    case ErrorCode::LimitViolation: return "limit-violation";
    case ErrorCode::PlannerInfeasible: return "planner-infeasible";
    case ErrorCode::IntegrationFailure: return "integration-failure";
    case ErrorCode::ReplayMismatch: return "replay-mismatch";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace orbhil
