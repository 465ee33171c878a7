#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "error_check.hpp"
#include "oracle.hpp"
#include "pausebench/report.hpp"
#include "pausebench/segmentation.hpp"
#include "pausebench/synth.hpp"

using namespace pausebench;

TEST_CASE("PortableRng follows the standard mt19937_64 sequence") {
  PortableRng rng(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next();
  CHECK(v == 9981545732273789042ull);

  PortableRng u(1);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    const auto k = u.integer(-3, 3);
    CHECK(k >= -3);
    CHECK(k <= 3);
    CHECK(u.truncated_normal(0.0, 1.0, 0.5) >= 0.5);
  }
}

TEST_CASE("generate_sequence: examples") {
  SUBCASE("one phrase, no pauses") {
    SynthProfile p;
    p.n_phrases = 1;
    p.boundary_pauses = false;
    const auto s = generate_sequence(p);
    REQUIRE(s.sequence.events.size() == 1);
    CHECK(s.truth.pct_pause == 0.0);
    CHECK_FALSE(s.truth.cv_phrase);
    CHECK_FALSE(s.truth.cv_pause);
  }
  SUBCASE("equal phrases give zero CV") {
    SynthProfile p;
    p.n_phrases = 3;
    p.phrase_dist.sd = 0.0;
    const auto s = generate_sequence(p);
    REQUIRE(s.truth.cv_phrase);
    CHECK(*s.truth.cv_phrase == 0.0);
  }
  SUBCASE("same seed, same sequence") {
    SynthProfile p;
    p.seed = 42;
    CHECK(generate_sequence(p).sequence == generate_sequence(p).sequence);
    SynthProfile q = p;
    q.seed = 43;
    CHECK_FALSE(generate_sequence(q).sequence == generate_sequence(p).sequence);
  }
}

TEST_CASE("generated sequences are valid and survive segmentation") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    SynthProfile p;
    p.seed = seed;
    p.n_phrases = 1 + seed % 12;
    p.boundary_pauses = seed % 2;
    const auto s = generate_sequence(p);
    s.sequence.validate();
    for (const auto& e : s.sequence.events) {
      CHECK(e.start == oracle::micro(e.start));
      if (e.is_pause()) CHECK(e.duration() >= kMinSynthPause - 1e-12);
    }
    EventSequence again = segment(to_track(s.sequence));
    again.recording_id = s.sequence.recording_id;
    CHECK(again.events == s.sequence.events);

    const FeatureVector f = extract_features(s.sequence);
    const auto o = oracle::brute_force_features(s.sequence);
    CHECK(std::abs(s.truth.total_duration - o.total_duration) < 1e-9);
    for (Feature ft : kAllFeatures) {
      REQUIRE(f.get(ft).has_value() == s.truth.get(ft).has_value());
      if (f.get(ft)) CHECK(std::abs(*f.get(ft) - *s.truth.get(ft)) < 1e-9);
    }
  }
}

TEST_CASE("profile validation") {
  SynthProfile p;
  p.n_phrases = 0;
  CHECK(error_code_of([&] { p.validate(); }) == ErrorCode::InvalidProfile);
  SynthProfile q;
  q.phrase_dist.sd = -1;
  CHECK(error_code_of([&] { generate_sequence(q); }) == ErrorCode::InvalidProfile);
  SynthProfile r;
  r.jitter_sd = -0.1;
  CHECK(error_code_of([&] { r.validate(); }) == ErrorCode::InvalidProfile);
}

TEST_CASE("perturb_alignment") {
  SynthProfile p;
  p.seed = 3;
  const EventSequence seq = generate_sequence(p).sequence;

  SUBCASE("zero jitter is the identity") {
    EventSequence back = segment(perturb_alignment(seq, 0.0, 1));
    back.recording_id = seq.recording_id;
    CHECK(back.events == seq.events);
  }
  SUBCASE("ordering is preserved under heavy jitter") {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const AlignmentTrack t = perturb_alignment(seq, 0.5, s);
      for (std::size_t i = 0; i < t.intervals.size(); ++i) {
        CHECK(t.intervals[i].end > t.intervals[i].start);
        if (i) CHECK(t.intervals[i].start == t.intervals[i - 1].end);
      }
    }
  }
  SUBCASE("same seed, same perturbation") {
    CHECK(perturb_alignment(seq, 0.05, 9) == perturb_alignment(seq, 0.05, 9));
  }
}

TEST_CASE("20 ms jitter moves total duration by < 0.1 s in 99% of seeds") {
  SynthProfile p;
  p.phrase_dist = {2.0, 0.3};
  std::size_t within = 0;
  const std::size_t seeds = 10000;
  for (std::uint64_t s = 0; s < seeds; ++s) {
    p.seed = s;
    const auto g = generate_sequence(p);
    const auto f = extract_features(segment(perturb_alignment(g.sequence, 0.020, s ^ 0xABCDu)));
    within += std::abs(f.total_duration - g.truth.total_duration) < 0.1;
  }
  CHECK(within >= seeds * 99 / 100);
}

TEST_CASE("render_audio") {
  SynthProfile p;
  p.seed = 12;
  const EventSequence seq = generate_sequence(p).sequence;

  const AudioBuffer a = render_audio(seq, 20.0, 16000, 1);
  CHECK(a.sample_rate == 16000);
  CHECK(std::abs(a.duration() - seq.span_end()) < 1e-3);
  const SnrEstimate e = estimate_snr(a, &seq);
  CHECK(std::abs(e.snr_db - 20.0) <= 0.5);
  for (double x : a.samples) CHECK(std::abs(x) <= 1.0);

  const AudioBuffer poor = render_audio(seq, 10.0, 16000, 1);
  CHECK(classify_quality(estimate_snr(poor, &seq)) == QualityLabel::Poor);

  // deterministic, and survives a PCM16 round trip close to the target
  CHECK(render_audio(seq, 20.0, 16000, 1).samples == a.samples);
  const AudioBuffer pcm = decode_wav(std::span<const std::uint8_t>(encode_wav(a)));
  CHECK(std::abs(estimate_snr(pcm, &seq).snr_db - 20.0) <= 0.5);

  EventSequence silent;
  silent.events = {{EventKind::Pause, 0.0, 1.0}};
  CHECK(error_code_of([&] { render_audio(silent, 20.0, 16000, 1); }) == ErrorCode::InvalidProfile);
}

TEST_CASE("corpus profile parsing") {
  const CorpusProfile c = parse_corpus_profile(
      R"({"n_phrases": 5, "phrase_dist": {"mean": 1.5, "sd": 0.2}, "jitter_sd": 0.05, "seed": 7,
          "snr_range": [10, 12], "count": 9, "sample_rate": 8000})");
  CHECK(c.base.n_phrases == 5);
  CHECK(c.base.phrase_dist.mean == 1.5);
  CHECK(c.base.jitter_sd == 0.05);
  CHECK(c.base.seed == 7);
  CHECK(c.snr_min == 10);
  CHECK(c.snr_max == 12);
  CHECK(c.count == 9);
  CHECK(c.sample_rate == 8000);
  CHECK(error_code_of([] { parse_corpus_profile(R"({"bogus": 1})"); }) == ErrorCode::InvalidProfile);
  CHECK(error_code_of([] { parse_corpus_profile("[1,2]"); }) == ErrorCode::InvalidProfile);
  CHECK(error_code_of([] { parse_corpus_profile(R"({"snr_range": [30, 10]})"); }) == ErrorCode::InvalidProfile);
}

TEST_CASE("corpus records") {
  CorpusProfile c;
  c.count = 40;
  const auto corpus = generate_corpus(c);
  REQUIRE(corpus.size() == 40);
  std::size_t als = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& r = corpus[i];
    CHECK(r.seed == (c.base.seed ^ i));
    CHECK(r.wpm > 0.0);
    CHECK(r.target_snr >= c.snr_min);
    CHECK(r.target_snr <= c.snr_max);
    CHECK(std::abs(r.wpm - speaking_rate(c.passage_words, r.truth.total_duration)) < 1e-9);
    als += r.group == Group::ALS;
    // without jitter the test track segments back to the reference
    EventSequence t = segment(r.test);
    t.recording_id = r.reference.recording_id;
    CHECK(t.events == r.reference.events);
  }
  CHECK(als > 5);
  CHECK(als < 35);
  CHECK(generate_record(c, 7).reference == corpus[7].reference);
}

TEST_CASE("write_corpus produces a loadable manifest") {
  const auto dir = std::filesystem::temp_directory_path() / "pausebench_synth_test";
  std::filesystem::remove_all(dir);
  CorpusProfile c;
  c.count = 4;
  c.sample_rate = 8000;
  const auto manifest = write_corpus(c, dir, 2);
  const auto rows = read_manifest(manifest);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK(std::filesystem::exists(row.wav_path));
    CHECK(std::filesystem::exists(row.ref_alignment_path));
    CHECK(std::filesystem::exists(row.test_alignment_path));
    CHECK(read_wav_file(row.wav_path.string()).sample_rate == 8000);
  }
  std::filesystem::remove_all(dir);
}
