#include "pausebench/error.hpp"

namespace pausebench {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MalformedContainer: return "MalformedContainer";
    case ErrorCode::UnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::EmptyAudio: return "EmptyAudio";
    case ErrorCode::NonFiniteSnr: return "NonFiniteSnr";
    case ErrorCode::NotATextGrid: return "NotATextGrid";
    case ErrorCode::TierNotFound: return "TierNotFound";
    case ErrorCode::PointTierOnly: return "PointTierOnly";
    case ErrorCode::OverlapDetected: return "OverlapDetected";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::NonAlternatingEvents: return "NonAlternatingEvents";
    case ErrorCode::EmptyTrack: return "EmptyTrack";
    case ErrorCode::NoSpeech: return "NoSpeech";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::TooFewPairs: return "TooFewPairs";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::MissingWpm: return "MissingWpm";
    case ErrorCode::EmptyManifest: return "EmptyManifest";
    case ErrorCode::AllRecordsExcluded: return "AllRecordsExcluded";
    case ErrorCode::UnwritableOutput: return "UnwritableOutput";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
  }
  return "Unknown";
}

}  // namespace pausebench
