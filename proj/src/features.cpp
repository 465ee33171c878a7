#include "pausebench/features.hpp"

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "pausebench/error.hpp"
#include "pausebench/segmentation.hpp"

namespace pausebench {

std::string_view feature_name(Feature f) noexcept {
  switch (f) {
    case Feature::PauseDuration: return "pause_duration";
    case Feature::TotalDuration: return "total_duration";
    case Feature::SpeechDuration: return "speech_duration";
    case Feature::PauseEvents: return "pause_events";
    case Feature::PctPause: return "pct_pause";
    case Feature::MeanPhrase: return "mean_phrase";
    case Feature::CvPhrase: return "cv_phrase";
    case Feature::CvPause: return "cv_pause";
  }
  return "";
}

std::string_view feature_label(Feature f) noexcept {
  switch (f) {
    case Feature::PauseDuration: return "Pause duration";
    case Feature::TotalDuration: return "Total duration";
    case Feature::SpeechDuration: return "Speech duration";
    case Feature::PauseEvents: return "Pause events";
    case Feature::PctPause: return "% Pause";
    case Feature::MeanPhrase: return "Mean phrase";
    case Feature::CvPhrase: return "CV phrase duration";
    case Feature::CvPause: return "CV pause duration";
  }
  return "";
}

std::string_view feature_unit(Feature f) noexcept {
  switch (f) {
    case Feature::PauseDuration:
    case Feature::TotalDuration:
    case Feature::SpeechDuration:
    case Feature::MeanPhrase: return "s";
    case Feature::PctPause: return "%";
    default: return "";
  }
}

std::optional<Feature> parse_feature(std::string_view name) noexcept {
  for (Feature f : kAllFeatures) {
    if (feature_name(f) == name) return f;
  }
  return std::nullopt;
}

std::optional<double> FeatureVector::get(Feature f) const noexcept {
  switch (f) {
    case Feature::PauseDuration: return pause_duration;
    case Feature::TotalDuration: return total_duration;
    case Feature::SpeechDuration: return speech_duration;
    case Feature::PauseEvents: return static_cast<double>(pause_events);
    case Feature::PctPause: return pct_pause;
    case Feature::MeanPhrase: return mean_phrase;
    case Feature::CvPhrase: return cv_phrase;
    case Feature::CvPause: return cv_pause;
  }
  return std::nullopt;
}

namespace {

double mean(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

std::optional<double> coefficient_of_variation(std::span<const double> xs, SdConvention sd) {
  if (xs.size() < 2) return std::nullopt;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double denom = static_cast<double>(sd == SdConvention::Sample ? xs.size() - 1 : xs.size());
  return std::sqrt(ss / denom) / m;
}

}  // namespace

FeatureVector extract_features(const EventSequence& seq, const FeatureOptions& options) {
  const std::vector<double> phrase = phrases(seq);
  if (phrase.empty()) {
    throw Error(ErrorCode::NoSpeech, "recording '" + seq.recording_id + "' has no speech events");
  }
  const std::vector<double> pauses = internal_pauses(seq);

  double onset = 0.0;
  double offset = 0.0;
  for (const auto& e : seq.events) {
    if (e.is_speech()) {
      onset = e.start;
      break;
    }
  }
  for (auto it = seq.events.rbegin(); it != seq.events.rend(); ++it) {
    if (it->is_speech()) {
      offset = it->end;
      break;
    }
  }

  FeatureVector fv;
  fv.total_duration = offset - onset;
  fv.pause_duration = std::accumulate(pauses.begin(), pauses.end(), 0.0);
  fv.speech_duration = std::accumulate(phrase.begin(), phrase.end(), 0.0);
  fv.pause_events = pauses.size();
  fv.pct_pause = 100.0 * fv.pause_duration / fv.total_duration;
  fv.mean_phrase = mean(phrase);
  fv.cv_phrase = coefficient_of_variation(phrase, options.sd);
  fv.cv_pause = coefficient_of_variation(pauses, options.sd);
  return fv;
}

double speaking_rate(double word_count, double total_duration) {
  if (!(word_count > 0.0) || !(total_duration > 0.0)) {
    throw Error(ErrorCode::NonPositiveInput, "word count and duration must be positive");
  }
  return 60.0 * word_count / total_duration;
}

}  // namespace pausebench
