#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pausebench {

enum class EventKind { Speech, Pause };

std::string_view to_string(EventKind kind) noexcept;

struct Event {
  EventKind kind = EventKind::Speech;
  double start = 0.0;
  double end = 0.0;

  double duration() const noexcept { return end - start; }
  bool is_speech() const noexcept { return kind == EventKind::Speech; }
  bool is_pause() const noexcept { return kind == EventKind::Pause; }

  friend bool operator==(const Event&, const Event&) = default;
};

/// Alternating speech/pause events tiling one recording's aligned span.
///
/// Leading and trailing pauses are kept (the SNR estimator needs them) and
/// are recognisable by position through is_boundary_pause().
struct EventSequence {
  std::string recording_id;
  std::vector<Event> events;
  double pause_threshold = 0.300;

  bool empty() const noexcept { return events.empty(); }
  bool has_speech() const noexcept;

  /// True for a pause that is the first or last event of the sequence.
  bool is_boundary_pause(std::size_t index) const noexcept;

  double span_start() const noexcept { return events.empty() ? 0.0 : events.front().start; }
  double span_end() const noexcept { return events.empty() ? 0.0 : events.back().end; }

  /// Throws NonAlternatingEvents or SchemaViolation when the alternation or
  /// tiling invariants do not hold.
  void validate() const;

  friend bool operator==(const EventSequence&, const EventSequence&) = default;
};

/// Reads the SPA export format: header `event_type,start_s,end_s`.
EventSequence parse_spa_export(std::string_view text, std::string recording_id = {});

/// Writes the same CSV format that parse_spa_export reads.
std::string format_event_csv(const EventSequence& seq);

}  // namespace pausebench
