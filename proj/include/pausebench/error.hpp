#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pausebench {

enum class ErrorCode {
  InvalidArgument,
  IoError,
  // audio-io
  MalformedContainer,
  UnsupportedEncoding,
  EmptyAudio,
  NonFiniteSnr,
  // alignment ingest
  NotATextGrid,
  TierNotFound,
  PointTierOnly,
  OverlapDetected,
  SchemaViolation,
  NonAlternatingEvents,
  EmptyTrack,
  // features
  NoSpeech,
  NonPositiveInput,
  // stats
  TooFewPairs,
  ConstantSeries,
  MissingWpm,
  // report
  EmptyManifest,
  AllRecordsExcluded,
  UnwritableOutput,
  // synth
  InvalidProfile,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (CLI exit codes, the exclusion log, Python) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pausebench
