#include "pausebench/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "pausebench/error.hpp"
#include "pausebench/timing.hpp"

namespace pausebench {

namespace {

struct Run {
  EventKind kind;
  std::int64_t start;
  std::int64_t end;

  std::int64_t length() const { return end - start; }
};

// Appends, merging with the previous run when it has the same kind.
void push_run(std::vector<Run>& runs, Run run) {
  if (!runs.empty() && runs.back().kind == run.kind) {
    runs.back().end = run.end;
  } else {
    runs.push_back(run);
  }
}

}  // namespace

EventSequence segment(const AlignmentTrack& track, const SegmentOptions& options) {
  if (track.empty()) throw Error(ErrorCode::EmptyTrack, "alignment track has no intervals");
  if (!(options.pause_threshold >= 0.0) || !(options.min_speech >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "thresholds must be non-negative");
  }
  const std::int64_t pause_min = to_micros(options.pause_threshold);
  const std::int64_t speech_min = to_micros(options.min_speech);

  // Pool contiguous intervals of the same class.
  std::vector<Run> raw;
  raw.reserve(track.intervals.size());
  for (const auto& iv : track.intervals) {
    const EventKind kind = is_silence_label(iv.label) ? EventKind::Pause : EventKind::Speech;
    push_run(raw, {kind, to_micros(iv.start), to_micros(iv.end)});
  }

  const bool any_speech =
      std::any_of(raw.begin(), raw.end(), [](const Run& r) { return r.kind == EventKind::Speech; });

  // Short silences become speech; with no speech in the track there is
  // nothing to absorb them into and they stay pauses.
  std::vector<Run> runs;
  runs.reserve(raw.size());
  for (Run r : raw) {
    if (any_speech && r.kind == EventKind::Pause && r.length() < pause_min) r.kind = EventKind::Speech;
    push_run(runs, r);
  }

  // A short speech event folds into its neighbouring pause(s); an interior
  // one joins both neighbours into a single pause.
  if (speech_min > 0 && runs.size() > 1) {
    std::vector<Run> kept;
    kept.reserve(runs.size());
    for (Run r : runs) {
      if (r.kind == EventKind::Speech && r.length() < speech_min) r.kind = EventKind::Pause;
      push_run(kept, r);
    }
    runs = std::move(kept);
  }

  EventSequence seq;
  seq.recording_id = track.recording_id;
  seq.pause_threshold = options.pause_threshold;
  seq.events.reserve(runs.size());
  for (const Run& r : runs) {
    seq.events.push_back({r.kind, from_micros(r.start), from_micros(r.end)});
  }
  return seq;
}

AlignmentTrack to_track(const EventSequence& seq) {
  AlignmentTrack track;
  track.recording_id = seq.recording_id;
  track.tier_name = "events";
  track.intervals.reserve(seq.events.size());
  for (const auto& e : seq.events) {
    track.intervals.push_back({e.start, e.end, e.is_speech() ? "speech" : ""});
  }
  return track;
}

std::vector<double> phrases(const EventSequence& seq) {
  std::vector<double> out;
  for (const auto& e : seq.events) {
    if (e.is_speech()) out.push_back(e.duration());
  }
  return out;
}

std::vector<double> internal_pauses(const EventSequence& seq) {
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < seq.events.size(); ++i) {
    const Event& e = seq.events[i];
    if (e.is_pause() && seq.events[i - 1].is_speech() && seq.events[i + 1].is_speech()) {
      out.push_back(e.duration());
    }
  }
  return out;
}

}  // namespace pausebench
