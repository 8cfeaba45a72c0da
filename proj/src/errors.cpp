#include "abeltheta/errors.hpp"

namespace abeltheta {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisibilityViolation: return "DivisibilityViolation";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EpsTooSmall: return "EpsTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingParam: return "MissingParam";
    case ErrorCode::CharacteristicOutOfRange: return "CharacteristicOutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
  }
  return "Unknown";
}

}  // namespace abeltheta
