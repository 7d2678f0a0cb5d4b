#include "frem/error.hpp"

namespace frem {

std::string_view
to_string(ErrorCode code) noexcept
{
  switch (code) {
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::EmptyObservations: return "EmptyObservations";
    case ErrorCode::InvalidSettings: return "InvalidSettings";
    case ErrorCode::InsufficientSpread: return "InsufficientSpread";
    case ErrorCode::InsufficientSample: return "InsufficientSample";
    case ErrorCode::InsufficientNeighborhood: return "InsufficientNeighborhood";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::AllFoldsFailed: return "AllFoldsFailed";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::MethodMismatch: return "MethodMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::TooManyFailures: return "TooManyFailures";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
  : std::runtime_error(std::string(to_string(code)) + ": " + message)
  , code_(code)
  , message_(message)
{}

void
raise(ErrorCode code, const std::string& message)
{
  throw Error(code, message);
}

} // namespace frem
