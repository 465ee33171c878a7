#include "pausebench/events.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "csv.hpp"
#include "pausebench/error.hpp"
#include "pausebench/timing.hpp"

namespace pausebench {

std::string_view to_string(EventKind kind) noexcept {
  return kind == EventKind::Speech ? "speech" : "pause";
}

bool EventSequence::has_speech() const noexcept {
  for (const auto& e : events) {
    if (e.is_speech()) return true;
  }
  return false;
}

bool EventSequence::is_boundary_pause(std::size_t index) const noexcept {
  if (index >= events.size() || !events[index].is_pause()) return false;
  return index == 0 || index + 1 == events.size();
}

void EventSequence::validate() const {
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    if (!(std::isfinite(e.start) && std::isfinite(e.end)) || e.start < 0.0) {
      throw Error(ErrorCode::SchemaViolation,
                  "event " + std::to_string(i) + " has invalid times");
    }
    if (to_micros(e.end) <= to_micros(e.start)) {
      throw Error(ErrorCode::SchemaViolation,
                  "event " + std::to_string(i) + " has non-positive duration");
    }
    if (i == 0) continue;
    const Event& prev = events[i - 1];
    if (prev.kind == e.kind) {
      throw Error(ErrorCode::NonAlternatingEvents,
                  "events " + std::to_string(i - 1) + " and " + std::to_string(i) +
                      " are both " + std::string(to_string(e.kind)));
    }
    if (to_micros(prev.end) != to_micros(e.start)) {
      throw Error(ErrorCode::SchemaViolation,
                  "event " + std::to_string(i) + " does not start where event " +
                      std::to_string(i - 1) + " ends");
    }
  }
}

namespace {

double parse_time_field(std::string_view field, std::size_t row, const char* column) {
  auto value = detail::parse_double(field);
  if (!value || !std::isfinite(*value)) {
    throw Error(ErrorCode::SchemaViolation, "row " + std::to_string(row) + ": column " +
                                                column + " is not a number");
  }
  return round_to_micros(*value);
}

}  // namespace

EventSequence parse_spa_export(std::string_view text, std::string recording_id) {
  const auto rows = detail::parse_csv(text);
  if (rows.empty()) throw Error(ErrorCode::SchemaViolation, "missing header");
  const auto& header = rows.front();
  if (header.size() != 3 || header[0] != "event_type" || header[1] != "start_s" ||
      header[2] != "end_s") {
    throw Error(ErrorCode::SchemaViolation, "header must be event_type,start_s,end_s");
  }

  EventSequence seq;
  seq.recording_id = std::move(recording_id);
  // SPA applies its own thresholding; its minimum pause length is not known.
  seq.pause_threshold = 0.0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != 3) {
      throw Error(ErrorCode::SchemaViolation,
                  "row " + std::to_string(r) + ": expected 3 fields");
    }
    Event e;
    if (row[0] == "speech") {
      e.kind = EventKind::Speech;
    } else if (row[0] == "pause") {
      e.kind = EventKind::Pause;
    } else {
      throw Error(ErrorCode::SchemaViolation,
                  "row " + std::to_string(r) + ": unknown event_type '" + row[0] + "'");
    }
    e.start = parse_time_field(row[1], r, "start_s");
    e.end = parse_time_field(row[2], r, "end_s");
    seq.events.push_back(e);
  }
  if (seq.events.empty()) throw Error(ErrorCode::EmptyTrack, "no events in SPA export");
  seq.validate();
  return seq;
}

std::string format_event_csv(const EventSequence& seq) {
  std::string out = "event_type,start_s,end_s\n";
  char buf[96];
  for (const auto& e : seq.events) {
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f\n", to_string(e.kind).data(), e.start, e.end);
    out += buf;
  }
  return out;
}

}  // namespace pausebench
