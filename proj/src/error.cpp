#include "shrinkreg/error.hpp"

namespace shrinkreg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularRestriction: return "SingularRestriction";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::TooFewRestrictions: return "TooFewRestrictions";
    case ErrorCode::InvalidLevel: return "InvalidLevel";
    case ErrorCode::DivergentMoment: return "DivergentMoment";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::MissingAlpha: return "MissingAlpha";
    case ErrorCode::FoldTooSmall: return "FoldTooSmall";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::TooManyRejections: return "TooManyRejections";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::FileNotFound: return "FileNotFound";
  }
  return "Unknown";
}

}  // namespace shrinkreg
