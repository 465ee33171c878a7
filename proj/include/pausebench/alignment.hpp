#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pausebench/error.hpp"

namespace pausebench {

enum class AlignmentSource { Wav2Vec2, MFA, SPA, Other };

std::string_view to_string(AlignmentSource source) noexcept;
AlignmentSource parse_alignment_source(std::string_view name) noexcept;

struct Interval {
  double start = 0.0;
  double end = 0.0;
  std::string label;

  double duration() const noexcept { return end - start; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Empty, whitespace-only, "sil", "sp", "spn" and "<p:>" (any case) are silence.
bool is_silence_label(std::string_view label) noexcept;

struct AlignmentTrack {
  std::string recording_id;
  std::vector<Interval> intervals;
  AlignmentSource source = AlignmentSource::Other;
  std::string tier_name;

  bool empty() const noexcept { return intervals.empty(); }
  double span_start() const noexcept { return intervals.empty() ? 0.0 : intervals.front().start; }
  double span_end() const noexcept { return intervals.empty() ? 0.0 : intervals.back().end; }

  friend bool operator==(const AlignmentTrack&, const AlignmentTrack&) = default;
};

struct TextGridOptions {
  // When unset the tier named "words" (any case) is preferred, then the
  // first interval tier in the file.
  std::optional<std::string> tier;
  std::string recording_id;
  AlignmentSource source = AlignmentSource::Other;
};

/// Parses a Praat text TextGrid in long or short form. UTF-8 and UTF-16
/// (either byte order, BOM required) are accepted. Gaps between intervals are
/// filled with silence so the result tiles the tier's [xmin, xmax].
AlignmentTrack parse_textgrid(std::string_view bytes, const TextGridOptions& options = {});

/// Long-form TextGrid with one interval tier; times printed to 6 decimals.
std::string serialize_textgrid(const AlignmentTrack& track);

/// Canonical interchange format:
/// `{"recording_id": str, "source": str, "tier": str?, "intervals": [[start, end, label], ...]}`
AlignmentTrack parse_alignment_json(std::string_view bytes);
std::string serialize_alignment_json(const AlignmentTrack& track);

/// Snaps times to microseconds, checks ordering and overlap, rejects
/// zero-length intervals and fills gaps with silence. Shared by every parser.
/// Unsorted starts raise `order_error`, overlaps raise OverlapDetected.
/// `origin` prefixes error messages with the offending field path.
void normalize_track(AlignmentTrack& track, std::string_view origin,
                     ErrorCode order_error = ErrorCode::SchemaViolation);

}  // namespace pausebench
