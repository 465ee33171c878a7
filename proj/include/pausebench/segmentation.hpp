#pragma once

#include <vector>

#include "pausebench/alignment.hpp"
#include "pausebench/events.hpp"

namespace pausebench {

inline constexpr double kDefaultPauseThreshold = 0.300;

struct SegmentOptions {
  /// Silences at least this long become pauses (an exactly-threshold
  /// silence is a pause). Shorter silences are absorbed into speech.
  double pause_threshold = kDefaultPauseThreshold;
  /// Speech events shorter than this are merged into the neighbouring
  /// pause(s). Zero disables the rule.
  double min_speech = 0.0;
};

/// Turns labelled aligner intervals into alternating speech/pause events.
///
/// Adjacent silence intervals are pooled before thresholding, so "sp"
/// followed by "" counts as a single silence. A track that holds only
/// silence yields a single pause event spanning the track.
EventSequence segment(const AlignmentTrack& track, const SegmentOptions& options = {});

/// Inverse of segment for an already-segmented sequence: speech events become
/// intervals labelled "speech", pauses become "" intervals.
AlignmentTrack to_track(const EventSequence& seq);

/// Duration of every speech event, in order.
std::vector<double> phrases(const EventSequence& seq);

/// Durations of pauses that sit strictly between two speech events.
std::vector<double> internal_pauses(const EventSequence& seq);

}  // namespace pausebench
