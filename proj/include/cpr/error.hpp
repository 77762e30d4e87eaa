#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cpr {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NonFinite,
  MalformedFile,
  Io,
  CapExceeded,
  NotRealFrame,
  // numerical failures
  NotPSD,
  NoKernel,
  IndefinitenessViolation,
  DefiniteInput,
  WrongDimension,
  Underdetermined,
};

std::string_view to_string(ErrorCode code);

/// True for codes that signal a failed numerical computation rather than bad input.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cpr
