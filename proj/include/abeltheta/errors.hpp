#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace abeltheta {

enum class ErrorCode {
  DivisibilityViolation,
  NotSymmetric,
  NotPositiveDefinite,
  DimensionMismatch,
  EpsTooSmall,
  InvalidArgument,
  MissingParam,
  CharacteristicOutOfRange,
  ParseError,
  ValidationError,
  UnknownCommand,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; code() names the failure
// so callers (and the CLI) can react without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace abeltheta
