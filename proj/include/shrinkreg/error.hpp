#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shrinkreg {

enum class ErrorCode {
  RankDeficient,
  DimensionMismatch,
  SingularRestriction,
  ZeroVariance,
  TooFewRestrictions,
  InvalidLevel,
  DivergentMoment,
  UnknownKind,
  MissingAlpha,
  FoldTooSmall,
  InvalidConfig,
  NotPositiveDefinite,
  TooManyRejections,
  MissingColumn,
  NonNumericCell,
  EmptyFile,
  ChecksumMismatch,
  FileNotFound,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status and a machine-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace shrinkreg
