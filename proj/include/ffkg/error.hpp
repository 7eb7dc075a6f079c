#pragma once

#include <stdexcept>
#include <string>

namespace ffkg {

enum class ErrorCode {
  ZeroWaveVector,
  NoBracket,
  PoleProximity,
  SingularMode,
  UnstableParameters,
  NonFinite,
  GridMismatch,
  InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

/// Single exception type for the library; the code tells callers (and the
/// CLI exit-code mapping) what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroWaveVector: return "ZeroWaveVector";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::SingularMode: return "SingularMode";
    case ErrorCode::UnstableParameters: return "UnstableParameters";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace ffkg
