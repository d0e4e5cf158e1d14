#pragma once

#include <stdexcept>
#include <string>

namespace ltidetect {

enum class ErrorCode {
  InvalidArgument,
  DomainError,
  NoConvergence,
  SingularMatrix,
  NotPositiveDefinite,
  SpectralRadiusNotContractive,
  BracketFailure,
  DetectorStateAboveThreshold,
  IoError,
};

/// All failures thrown by the library carry a code so that callers (in
/// particular the C API layer) can map them to stable error identifiers.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) raise(code, message);
}

}  // namespace ltidetect
