#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pausebench/alignment.hpp"
#include "pausebench/audio.hpp"
#include "pausebench/events.hpp"
#include "pausebench/features.hpp"
#include "pausebench/stats.hpp"

namespace pausebench {

/// Seeded source built on std::mt19937_64 (whose output sequence is fixed by
/// the standard) with hand-written uniform/normal transforms, so a seed
/// produces the same corpus on every platform.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi);
  double normal();
  /// Normal(mean, sd) resampled until >= lower; falls back to `lower`.
  double truncated_normal(double mean, double sd, double lower);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct Distribution {
  double mean = 1.0;
  double sd = 0.0;
};

inline constexpr double kMinSynthPhrase = 0.05;
inline constexpr double kMinSynthPause = 0.301;
inline constexpr double kBoundaryPauseMin = 0.5;
inline constexpr double kBoundaryPauseMax = 1.0;

struct SynthProfile {
  std::size_t n_phrases = 8;
  Distribution phrase_dist{2.0, 0.6};
  Distribution pause_dist{0.7, 0.3};
  bool boundary_pauses = true;
  double jitter_sd = 0.0;
  std::optional<double> target_snr;
  std::uint64_t seed = 42;

  /// Throws InvalidProfile.
  void validate() const;
};

struct SyntheticSequence {
  EventSequence sequence;
  FeatureVector truth;
};

/// Phrases are drawn from phrase_dist truncated at 0.05 s and pauses from
/// pause_dist truncated at 0.301 s, so every generated pause survives the
/// default threshold. Leading/trailing pauses are uniform in [0.5, 1.0] s.
/// Times lie on the microsecond grid.
SyntheticSequence generate_sequence(const SynthProfile& profile);

/// Ground-truth features computed straight from the event list, without
/// going through the features module.
FeatureVector ground_truth_features(const EventSequence& seq);

/// Moves every event boundary by normal noise (clipped at 3 SD) while keeping
/// each boundary between the midpoints of its neighbouring events, so order
/// is preserved and every interval keeps a positive length.
AlignmentTrack perturb_alignment(const EventSequence& seq, double jitter_sd, std::uint64_t seed);

/// Harmonic tone complexes with a slowly wandering envelope in speech events,
/// low-passed Gaussian noise everywhere. The noise gain is solved so that the
/// mean power over speech events divided by the mean power over pauses equals
/// the target exactly.
AudioBuffer render_audio(const EventSequence& seq, double target_snr_db, std::uint32_t sample_rate,
                         std::uint64_t seed);

struct CorpusProfile {
  SynthProfile base;
  std::size_t count = 200;
  std::uint32_t sample_rate = 16000;
  /// Per-record phrase count varies uniformly by up to this many.
  std::size_t n_phrases_spread = 2;
  /// Log-normal tempo spread applied per record (ALS records are slowed further).
  double tempo_sd = 0.2;
  double als_fraction = 0.5;
  double snr_min = 5.0;
  double snr_max = 30.0;
  double passage_words = 60.0;
};

/// Accepts the SynthProfile fields plus the corpus fields above:
/// n_phrases, phrase_dist {mean, sd}, pause_dist {mean, sd}, boundary_pauses,
/// jitter_sd, target_snr, seed, sample_rate, n_phrases_spread, tempo_sd,
/// als_fraction, snr_range [min, max], passage_words, count.
CorpusProfile parse_corpus_profile(std::string_view json_text);

struct CorpusRecord {
  std::string recording_id;
  std::string speaker_id;
  Group group = Group::HC;
  double wpm = 0.0;
  double target_snr = 0.0;
  std::uint64_t seed = 0;
  EventSequence reference;
  AlignmentTrack test;
  FeatureVector truth;
};

/// Record i uses seed (base seed XOR i).
CorpusRecord generate_record(const CorpusProfile& profile, std::size_t index);
std::vector<CorpusRecord> generate_corpus(const CorpusProfile& profile);

/// Writes <id>.wav, <id>.ref.csv (SPA format), <id>.test.json and manifest.csv.
/// Returns the manifest path.
std::filesystem::path write_corpus(const CorpusProfile& profile, const std::filesystem::path& out_dir,
                                   unsigned jobs = 1);

}  // namespace pausebench
