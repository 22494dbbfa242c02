#pragma once

#include <stdexcept>
#include <string>

namespace hauteur {

enum class ErrorCode {
  DegenerateInput,
  Nonconvergence,
  NotEllipticSurface,
  SingularCurve,
  NeedsModelChange,
  Precision,
  UndefinedAtOrigin,
  InsufficientDepth,
  Domain,
  NormalizeFirst,
  Pole,
  Resource,
  Parse,
  OffCurve,
  SpecMismatch,
  Io,
  Usage,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hauteur
