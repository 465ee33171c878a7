#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "pausebench/events.hpp"

namespace pausebench {

enum class Feature : std::size_t {
  PauseDuration,
  TotalDuration,
  SpeechDuration,
  PauseEvents,
  PctPause,
  MeanPhrase,
  CvPhrase,
  CvPause,
};

inline constexpr std::size_t kFeatureCount = 8;

inline constexpr std::array<Feature, kFeatureCount> kAllFeatures = {
    Feature::PauseDuration, Feature::TotalDuration, Feature::SpeechDuration,
    Feature::PauseEvents,   Feature::PctPause,      Feature::MeanPhrase,
    Feature::CvPhrase,      Feature::CvPause,
};

/// Machine name, e.g. "pause_duration".
std::string_view feature_name(Feature f) noexcept;
/// Table label, e.g. "Pause duration".
std::string_view feature_label(Feature f) noexcept;
/// "s", "%" or "" for dimensionless quantities.
std::string_view feature_unit(Feature f) noexcept;
std::optional<Feature> parse_feature(std::string_view name) noexcept;

/// The eight timing features of one recording. Coefficients of variation
/// are empty when there are fewer than two phrases / internal pauses.
struct FeatureVector {
  double pause_duration = 0.0;
  double total_duration = 0.0;
  double speech_duration = 0.0;
  std::size_t pause_events = 0;
  double pct_pause = 0.0;
  double mean_phrase = 0.0;
  std::optional<double> cv_phrase;
  std::optional<double> cv_pause;

  /// Uniform accessor; empty only for an undefined coefficient of variation.
  std::optional<double> get(Feature f) const noexcept;
};

enum class SdConvention { Sample, Population };

struct FeatureOptions {
  SdConvention sd = SdConvention::Sample;
};

/// Requires at least one speech event (NoSpeech otherwise). Boundary pauses
/// never contribute: the total is measured from the first speech onset to
/// the last speech offset.
FeatureVector extract_features(const EventSequence& seq, const FeatureOptions& options = {});

/// Words per minute. Both arguments must be positive.
double speaking_rate(double word_count, double total_duration);

}  // namespace pausebench
