#include <doctest.h>

#include <cmath>
#include <random>

#include "error_check.hpp"
#include "oracle.hpp"
#include "pausebench/features.hpp"
#include "pausebench/segmentation.hpp"

using namespace pausebench;

namespace {

EventSequence seq(std::initializer_list<Event> ev) {
  EventSequence s;
  s.events = ev;
  return s;
}

constexpr auto S = EventKind::Speech;
constexpr auto P = EventKind::Pause;

void check_against_oracle(const FeatureVector& f, const oracle::Features& o, double tol) {
  CHECK(std::abs(f.pause_duration - o.pause_duration) <= tol);
  CHECK(std::abs(f.total_duration - o.total_duration) <= tol);
  CHECK(std::abs(f.speech_duration - o.speech_duration) <= tol);
  CHECK(static_cast<double>(f.pause_events) == o.pause_events);
  CHECK(std::abs(f.pct_pause - o.pct_pause) <= tol);
  CHECK(std::abs(f.mean_phrase - o.mean_phrase) <= tol);
  REQUIRE(f.cv_phrase.has_value() == o.cv_phrase.has_value());
  if (o.cv_phrase) CHECK(std::abs(*f.cv_phrase - *o.cv_phrase) <= tol);
  REQUIRE(f.cv_pause.has_value() == o.cv_pause.has_value());
  if (o.cv_pause) CHECK(std::abs(*f.cv_pause - *o.cv_pause) <= tol);
}

}  // namespace

TEST_CASE("extract_features: single phrase") {
  const FeatureVector f = extract_features(seq({{S, 0, 4}}));
  CHECK(f.pause_duration == 0.0);
  CHECK(f.total_duration == 4.0);
  CHECK(f.speech_duration == 4.0);
  CHECK(f.pause_events == 0);
  CHECK(f.pct_pause == 0.0);
  CHECK(f.mean_phrase == 4.0);
  CHECK_FALSE(f.cv_phrase);
  CHECK_FALSE(f.cv_pause);
}

TEST_CASE("extract_features: worked example") {
  const FeatureVector f =
      extract_features(seq({{S, 0.5, 2.5}, {P, 2.5, 3.5}, {S, 3.5, 6.0}, {P, 6.0, 6.4}, {S, 6.4, 8.4}}));
  CHECK(f.pause_duration == doctest::Approx(1.4).epsilon(1e-12));
  CHECK(f.total_duration == doctest::Approx(7.9).epsilon(1e-12));
  CHECK(f.speech_duration == doctest::Approx(6.5).epsilon(1e-12));
  CHECK(f.pause_events == 2);
  CHECK(f.pct_pause == doctest::Approx(17.72151898734177).epsilon(1e-12));
  CHECK(f.mean_phrase == doctest::Approx(2.1666666666666665).epsilon(1e-12));
  CHECK(*f.cv_phrase == doctest::Approx(0.13323467750529824).epsilon(1e-12));
  CHECK(*f.cv_pause == doctest::Approx(0.6060915267313265).epsilon(1e-12));
}

TEST_CASE("extract_features: boundary pauses ignored") {
  const FeatureVector f = extract_features(seq({{P, 0, 1}, {S, 1, 3}, {P, 3, 4}, {S, 4, 6}, {P, 6, 7}}));
  CHECK(f.total_duration == 5.0);
  CHECK(f.pause_duration == 1.0);
  CHECK(f.pct_pause == doctest::Approx(20.0));
  CHECK(f.pause_events == 1);
}

TEST_CASE("extract_features: population SD option") {
  const auto s = seq({{S, 0, 1}, {P, 1, 2}, {S, 2, 5}});
  // phrases 1 and 3: mean 2, population SD 1, sample SD sqrt(2)
  CHECK(*extract_features(s).cv_phrase == doctest::Approx(std::sqrt(2.0) / 2.0));
  CHECK(*extract_features(s, {.sd = SdConvention::Population}).cv_phrase == doctest::Approx(0.5));
}

TEST_CASE("extract_features: errors") {
  CHECK(error_code_of([] { extract_features(seq({{P, 0, 1}})); }) == ErrorCode::NoSpeech);
  CHECK(error_code_of([] { extract_features(EventSequence{}); }) == ErrorCode::NoSpeech);
}

TEST_CASE("extract_features agrees with the brute-force oracle") {
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 1000; ++i) {
    EventSequence s = oracle::random_sequence(rng);
    if (!s.has_speech()) continue;
    check_against_oracle(extract_features(s), oracle::brute_force_features(s), 1e-9);
  }
}

TEST_CASE("feature invariants") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> shift(-2.0, 50.0);
  // integer gains keep scaled times on the microsecond grid
  std::uniform_int_distribution<int> gain(2, 10);
  for (int i = 0; i < 300; ++i) {
    const EventSequence s = oracle::random_sequence(rng);
    if (!s.has_speech()) continue;
    const FeatureVector base = extract_features(s);

    CHECK(base.pct_pause >= 0.0);
    CHECK(base.pct_pause < 100.0);
    CHECK(base.mean_phrase > 0.0);
    CHECK(base.cv_phrase.has_value() == (phrases(s).size() >= 2));
    CHECK(base.cv_pause.has_value() == (internal_pauses(s).size() >= 2));
    CHECK(std::abs(base.speech_duration + base.pause_duration - base.total_duration) < 1e-9);

    const double dt = std::max(shift(rng), -s.span_start());
    EventSequence moved = s;
    for (auto& e : moved.events) {
      e.start += dt;
      e.end += dt;
    }
    const FeatureVector m = extract_features(moved);
    for (Feature f : kAllFeatures) {
      REQUIRE(m.get(f).has_value() == base.get(f).has_value());
      if (base.get(f)) CHECK(std::abs(*m.get(f) - *base.get(f)) < 1e-9);
    }

    const double g = static_cast<double>(gain(rng));
    AlignmentTrack scaled_track = to_track(s);
    for (auto& iv : scaled_track.intervals) {
      iv.start *= g;
      iv.end *= g;
    }
    const FeatureVector sc = extract_features(segment(scaled_track, {.pause_threshold = 0.0}));
    CHECK(std::abs(sc.pause_duration - g * base.pause_duration) < 1e-9);
    CHECK(std::abs(sc.total_duration - g * base.total_duration) < 1e-9);
    CHECK(std::abs(sc.speech_duration - g * base.speech_duration) < 1e-9);
    CHECK(std::abs(sc.mean_phrase - g * base.mean_phrase) < 1e-9);
    CHECK(sc.pause_events == base.pause_events);
    CHECK(std::abs(sc.pct_pause - base.pct_pause) < 1e-9);
    if (base.cv_phrase) CHECK(std::abs(*sc.cv_phrase - *base.cv_phrase) < 1e-9);
    if (base.cv_pause) CHECK(std::abs(*sc.cv_pause - *base.cv_pause) < 1e-9);
  }
}

TEST_CASE("lengthening an internal pause raises pct_pause") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    EventSequence s = oracle::random_sequence(rng);
    const auto internal = internal_pauses(s);
    if (internal.empty()) continue;
    const double before = extract_features(s).pct_pause;
    std::size_t k = 0;
    while (!(s.events[k].is_pause() && !s.is_boundary_pause(k))) ++k;
    const double extra = 0.25;
    s.events[k].end += extra;
    for (std::size_t j = k + 1; j < s.events.size(); ++j) {
      s.events[j].start += extra;
      s.events[j].end += extra;
    }
    CHECK(extract_features(s).pct_pause > before);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("speaking_rate") {
  CHECK(speaking_rate(60, 30) == 120.0);
  CHECK(speaking_rate(60, 22.5) == doctest::Approx(160.0));
  CHECK(speaking_rate(60, 60) == 60.0);
  CHECK(error_code_of([] { speaking_rate(60, 0); }) == ErrorCode::NonPositiveInput);
  CHECK(error_code_of([] { speaking_rate(0, 10); }) == ErrorCode::NonPositiveInput);
}

TEST_CASE("feature names") {
  for (Feature f : kAllFeatures) CHECK(parse_feature(feature_name(f)) == f);
  CHECK(feature_name(Feature::CvPause) == "cv_pause");
  CHECK_FALSE(parse_feature("wpm"));
}
