#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frem {

enum class ErrorCode {
  GridMismatch,
  EmptyObservations,
  InvalidSettings,
  InsufficientSpread,
  InsufficientSample,
  InsufficientNeighborhood,
  RankDeficient,
  AllFoldsFailed,
  EmptyWindow,
  DegenerateSample,
  MethodMismatch,
  ParseError,
  SchemaError,
  IoError,
  TooManyFailures,
};

std::string_view to_string(ErrorCode code) noexcept;

//! Every failure raised by the library carries one of the codes above so the
//! CLI can report it in machine-readable form.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

private:
  ErrorCode code_;
  std::string message_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

} // namespace frem
