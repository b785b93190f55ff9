#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sifbm {

enum class ErrorCode {
  KindMismatch,
  InvalidSet,
  InvalidH,
  UnsupportedAction,
  UnsupportedCollection,
  OutOfRange,
  OutOfDomain,
  NoConvergence,
  NotPsd,
  NotIncreasing,
  NotDecreasing,
  TooManySubtracted,
  MissingPoint,
  PreconditionViolated,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::InvalidSet: return "InvalidSet";
    case ErrorCode::InvalidH: return "InvalidH";
    case ErrorCode::UnsupportedAction: return "UnsupportedAction";
    case ErrorCode::UnsupportedCollection: return "UnsupportedCollection";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::NotIncreasing: return "NotIncreasing";
    case ErrorCode::NotDecreasing: return "NotDecreasing";
    case ErrorCode::TooManySubtracted: return "TooManySubtracted";
    case ErrorCode::MissingPoint: return "MissingPoint";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so that
/// callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sifbm
