#include "pausebench/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include <nlohmann/json.hpp>

#include "csv.hpp"
#include "parallel.hpp"
#include "pausebench/error.hpp"
#include "pausebench/timing.hpp"

namespace pausebench {

double PortableRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::int64_t PortableRng::integer(std::int64_t lo, std::int64_t hi) {
  const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return lo + static_cast<std::int64_t>(v % range);
}

double PortableRng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

double PortableRng::truncated_normal(double mean, double sd, double lower) {
  if (sd == 0.0) return std::max(mean, lower);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double v = mean + sd * normal();
    if (v >= lower) return v;
  }
  return lower;
}

void SynthProfile::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidProfile, what); };
  if (n_phrases == 0) bad("n_phrases must be at least 1");
  if (!(phrase_dist.mean > 0.0) || !(pause_dist.mean > 0.0)) bad("distribution means must be positive");
  if (!(phrase_dist.sd >= 0.0) || !(pause_dist.sd >= 0.0)) bad("distribution SDs must be non-negative");
  if (!(jitter_sd >= 0.0)) bad("jitter_sd must be non-negative");
  if (target_snr && !std::isfinite(*target_snr)) bad("target_snr must be finite");
}

SyntheticSequence generate_sequence(const SynthProfile& profile) {
  profile.validate();
  PortableRng rng(profile.seed);
  const std::int64_t min_phrase = to_micros(kMinSynthPhrase);
  const std::int64_t min_pause = to_micros(kMinSynthPause);
  auto draw = [&](const Distribution& d, double lower, std::int64_t floor_us) {
    return std::max(floor_us, to_micros(rng.truncated_normal(d.mean, d.sd, lower)));
  };

  EventSequence seq;
  seq.pause_threshold = 0.300;
  std::int64_t t = 0;
  auto push = [&](EventKind kind, std::int64_t length) {
    seq.events.push_back({kind, from_micros(t), from_micros(t + length)});
    t += length;
  };
  // leading/trailing silence, 0.5..1.0 s
  auto boundary = [&] { return to_micros(rng.uniform(kBoundaryPauseMin, kBoundaryPauseMax)); };
  if (profile.boundary_pauses) push(EventKind::Pause, boundary());
  for (std::size_t i = 0; i < profile.n_phrases; ++i) {
    if (i > 0) push(EventKind::Pause, draw(profile.pause_dist, kMinSynthPause, min_pause));
    push(EventKind::Speech, draw(profile.phrase_dist, kMinSynthPhrase, min_phrase));
  }
  if (profile.boundary_pauses) push(EventKind::Pause, boundary());

  SyntheticSequence out;
  out.truth = ground_truth_features(seq);
  out.sequence = std::move(seq);
  return out;
}

FeatureVector ground_truth_features(const EventSequence& seq) {
  // Integer microseconds throughout; the generator emits grid-aligned times.
  const auto& ev = seq.events;
  std::vector<std::int64_t> speech;
  std::vector<std::int64_t> pauses;
  std::optional<std::int64_t> onset;
  std::int64_t offset = 0;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const std::int64_t a = to_micros(ev[i].start), b = to_micros(ev[i].end);
    if (ev[i].kind == EventKind::Speech) {
      speech.push_back(b - a);
      if (!onset) onset = a;
      offset = b;
    } else if (i > 0 && i + 1 < ev.size()) {
      pauses.push_back(b - a);
    }
  }
  if (speech.empty()) throw Error(ErrorCode::NoSpeech, "sequence has no speech");

  auto sum_of = [](const std::vector<std::int64_t>& v) {
    std::int64_t s = 0;
    for (auto x : v) s += x;
    return s;
  };
  auto cv_of = [&](const std::vector<std::int64_t>& v) -> std::optional<double> {
    if (v.size() < 2) return std::nullopt;
    const auto n = static_cast<std::int64_t>(v.size());
    const std::int64_t s = sum_of(v);
    // n * sum of squared deviations, exact in integers
    long double nss = 0;
    for (auto x : v) {
      const long double d = static_cast<long double>(n * x - s);
      nss += d * d;
    }
    const long double var = nss / (static_cast<long double>(n) * n * (n - 1));
    return static_cast<double>(std::sqrt(var) / (static_cast<long double>(s) / n));
  };

  FeatureVector fv;
  fv.total_duration = from_micros(offset - *onset);
  fv.pause_duration = from_micros(sum_of(pauses));
  fv.speech_duration = from_micros(sum_of(speech));
  fv.pause_events = pauses.size();
  fv.pct_pause = 100.0 * static_cast<double>(sum_of(pauses)) / static_cast<double>(offset - *onset);
  fv.mean_phrase = from_micros(sum_of(speech)) / static_cast<double>(speech.size());
  fv.cv_phrase = cv_of(speech);
  fv.cv_pause = cv_of(pauses);
  return fv;
}

AlignmentTrack perturb_alignment(const EventSequence& seq, double jitter_sd, std::uint64_t seed) {
  if (!(jitter_sd >= 0.0)) throw Error(ErrorCode::InvalidArgument, "jitter_sd must be non-negative");
  AlignmentTrack track;
  track.recording_id = seq.recording_id;
  track.tier_name = "words";
  if (seq.empty()) return track;

  const std::size_t k = seq.events.size();
  std::vector<std::int64_t> bounds(k + 1);
  for (std::size_t i = 0; i < k; ++i) bounds[i] = to_micros(seq.events[i].start);
  bounds[k] = to_micros(seq.events.back().end);

  std::vector<std::int64_t> moved = bounds;
  if (jitter_sd > 0.0) {
    PortableRng rng(seed);
    const double limit = 3.0 * jitter_sd;
    for (std::size_t i = 0; i <= k; ++i) {
      const double shift = std::clamp(jitter_sd * rng.normal(), -limit, limit);
      std::int64_t lo = i == 0 ? std::max<std::int64_t>(0, bounds[0] - to_micros(limit))
                               : (bounds[i - 1] + bounds[i]) / 2 + 1;
      std::int64_t hi = i == k ? bounds[k] + to_micros(limit) : (bounds[i] + bounds[i + 1]) / 2 - 1;
      if (hi < lo) lo = hi = bounds[i];
      moved[i] = std::clamp(bounds[i] + to_micros(shift), lo, hi);
    }
  }
  track.intervals.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    track.intervals.push_back(
        {from_micros(moved[i]), from_micros(moved[i + 1]), seq.events[i].is_speech() ? "speech" : ""});
  }
  return track;
}

AudioBuffer render_audio(const EventSequence& seq, double target_snr_db, std::uint32_t sample_rate,
                         std::uint64_t seed) {
  if (!std::isfinite(target_snr_db)) throw Error(ErrorCode::InvalidProfile, "target SNR must be finite");
  if (sample_rate < 8000) throw Error(ErrorCode::InvalidProfile, "sample rate must be at least 8000 Hz");
  if (!seq.has_speech()) throw Error(ErrorCode::InvalidProfile, "sequence has no speech to render");

  const double rate = sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(seq.span_end() * rate));
  auto index = [&](double t) {
    return std::min(n, static_cast<std::size_t>(std::max<long long>(0, std::llround(t * rate))));
  };
  PortableRng rng(seed);

  std::vector<double> noise(n);
  double state = 0.0;
  for (double& x : noise) {
    state = 0.5 * state + rng.normal();
    x = state;
  }

  std::vector<double> speech(n, 0.0);
  std::vector<char> is_speech(n, 0);
  const double two_pi = 2.0 * std::numbers::pi;
  const std::size_t fade = static_cast<std::size_t>(0.010 * rate);
  const std::size_t env_step = static_cast<std::size_t>(0.020 * rate);
  for (const auto& e : seq.events) {
    if (!e.is_speech()) continue;
    const std::size_t a = index(e.start);
    const std::size_t b = index(e.end);
    if (b <= a) continue;
    const double f0 = rng.uniform(100.0, 220.0);
    const auto harmonics = static_cast<std::size_t>(std::min(3800.0, 0.45 * rate) / f0);
    std::vector<std::complex<double>> phasor(harmonics), step(harmonics);
    for (std::size_t h = 0; h < harmonics; ++h) {
      phasor[h] = std::polar(1.0, two_pi * rng.uniform());
      step[h] = std::polar(1.0, two_pi * f0 * static_cast<double>(h + 1) / rate);
    }
    // Envelope control points every 20 ms, linearly interpolated.
    const std::size_t points = (b - a) / env_step + 2;
    std::vector<double> env(points);
    for (double& v : env) v = std::clamp(1.0 + 0.3 * rng.normal(), 0.4, 1.6);
    const std::size_t len = b - a;
    for (std::size_t i = 0; i < len; ++i) {
      if (i % 512 == 0) {
        for (auto& z : phasor) z /= std::abs(z);
      }
      double v = 0.0;
      for (std::size_t h = 0; h < harmonics; ++h) {
        v += phasor[h].imag() / static_cast<double>(h + 1);
        phasor[h] *= step[h];
      }
      const double pos = static_cast<double>(i) / env_step;
      const auto j = static_cast<std::size_t>(pos);
      const double frac = pos - j;
      double gain = env[j] * (1.0 - frac) + env[j + 1] * frac;
      const std::size_t edge = std::min(i, len - 1 - i);
      if (edge < fade) gain *= 0.5 - 0.5 * std::cos(std::numbers::pi * (edge + 0.5) / fade);
      speech[a + i] = gain * v;
      is_speech[a + i] = 1;
    }
  }

  // Solve g for mean((s + g n)^2 | speech) / mean((g n)^2 | pause) = R.
  double a_ss = 0.0, b_sn = 0.0, c_nn = 0.0, d_nn = 0.0;
  std::size_t n_speech = 0, n_pause = 0;
  for (const auto& e : seq.events) {
    const std::size_t a = index(e.start);
    const std::size_t b = index(e.end);
    for (std::size_t i = a; i < b; ++i) {
      if (e.is_speech()) {
        a_ss += speech[i] * speech[i];
        b_sn += 2.0 * speech[i] * noise[i];
        c_nn += noise[i] * noise[i];
        ++n_speech;
      } else {
        d_nn += noise[i] * noise[i];
        ++n_pause;
      }
    }
  }
  if (n_speech == 0) throw Error(ErrorCode::InvalidProfile, "speech events are shorter than one sample");
  const double ratio = std::pow(10.0, target_snr_db / 10.0);
  a_ss /= n_speech;
  b_sn /= n_speech;
  c_nn /= n_speech;
  double gain;
  if (n_pause == 0) {
    gain = std::sqrt(a_ss / (ratio * c_nn));
  } else {
    d_nn /= n_pause;
    const double q = ratio * d_nn - c_nn;
    if (!(q > 0.0)) {
      throw Error(ErrorCode::InvalidProfile, "target SNR is too low to construct with additive noise");
    }
    gain = (b_sn + std::sqrt(b_sn * b_sn + 4.0 * a_ss * q)) / (2.0 * q);
  }

  AudioBuffer audio;
  audio.sample_rate = sample_rate;
  audio.samples.resize(n);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    audio.samples[i] = speech[i] + gain * noise[i];
    peak = std::max(peak, std::abs(audio.samples[i]));
  }
  if (peak > 0.0) {
    const double scale = 0.7 / peak;
    for (double& x : audio.samples) x *= scale;
  }
  return audio;
}

namespace {

Distribution parse_distribution(const nlohmann::json& j, const char* key) {
  if (j.is_object()) return {j.at("mean").get<double>(), j.at("sd").get<double>()};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw Error(ErrorCode::InvalidProfile, std::string(key) + " must be {mean, sd} or [mean, sd]");
}

}  // namespace

CorpusProfile parse_corpus_profile(std::string_view json_text) {
  CorpusProfile p;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidProfile, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::InvalidProfile, "profile must be a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      const auto& v = it.value();
      if (key == "n_phrases") p.base.n_phrases = v.get<std::size_t>();
      else if (key == "phrase_dist") p.base.phrase_dist = parse_distribution(v, "phrase_dist");
      else if (key == "pause_dist") p.base.pause_dist = parse_distribution(v, "pause_dist");
      else if (key == "boundary_pauses") p.base.boundary_pauses = v.get<bool>();
      else if (key == "jitter_sd") p.base.jitter_sd = v.get<double>();
      else if (key == "target_snr") p.base.target_snr = v.is_null() ? std::nullopt : std::optional(v.get<double>());
      else if (key == "seed") p.base.seed = v.get<std::uint64_t>();
      else if (key == "sample_rate") p.sample_rate = v.get<std::uint32_t>();
      else if (key == "n_phrases_spread") p.n_phrases_spread = v.get<std::size_t>();
      else if (key == "tempo_sd") p.tempo_sd = v.get<double>();
      else if (key == "als_fraction") p.als_fraction = v.get<double>();
      else if (key == "passage_words") p.passage_words = v.get<double>();
      else if (key == "count") p.count = v.get<std::size_t>();
      else if (key == "snr_range") {
        if (!v.is_array() || v.size() != 2) throw Error(ErrorCode::InvalidProfile, "snr_range must be [min, max]");
        p.snr_min = v[0].get<double>();
        p.snr_max = v[1].get<double>();
      } else {
        throw Error(ErrorCode::InvalidProfile, "unknown profile field '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidProfile, std::string("bad profile value: ") + e.what());
  }
  p.base.validate();
  if (p.sample_rate < 8000) throw Error(ErrorCode::InvalidProfile, "sample_rate must be at least 8000");
  if (!(p.snr_min <= p.snr_max)) throw Error(ErrorCode::InvalidProfile, "snr_range must be ordered");
  if (!(p.als_fraction >= 0.0 && p.als_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidProfile, "als_fraction must lie in [0, 1]");
  }
  return p;
}

namespace {

constexpr std::uint64_t kJitterStream = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kAudioStream = 0xD1B54A32D192ED03ull;

std::string padded(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%04zu", prefix, i);
  return buf;
}

}  // namespace

CorpusRecord generate_record(const CorpusProfile& profile, std::size_t index) {
  CorpusRecord rec;
  rec.seed = profile.base.seed ^ static_cast<std::uint64_t>(index);
  rec.recording_id = padded("rec", index);
  rec.speaker_id = padded("spk", index);

  PortableRng rng(rec.seed);
  rec.group = rng.uniform() < profile.als_fraction ? Group::ALS : Group::HC;
  double tempo = std::exp(profile.tempo_sd * rng.normal());
  if (rec.group == Group::ALS) tempo *= std::exp(std::abs(0.35 * rng.normal()));
  const auto spread = static_cast<std::int64_t>(profile.n_phrases_spread);
  const std::int64_t phrases =
      static_cast<std::int64_t>(profile.base.n_phrases) + (spread > 0 ? rng.integer(-spread, spread) : 0);
  rec.target_snr = profile.base.target_snr ? *profile.base.target_snr : rng.uniform(profile.snr_min, profile.snr_max);

  SynthProfile sp = profile.base;
  sp.n_phrases = static_cast<std::size_t>(std::max<std::int64_t>(1, phrases));
  sp.phrase_dist = {profile.base.phrase_dist.mean * tempo, profile.base.phrase_dist.sd * tempo};
  const double pause_scale = std::pow(tempo, 1.5);
  sp.pause_dist = {profile.base.pause_dist.mean * pause_scale, profile.base.pause_dist.sd * pause_scale};
  sp.seed = rng.next();

  SyntheticSequence gen = generate_sequence(sp);
  rec.reference = std::move(gen.sequence);
  rec.reference.recording_id = rec.recording_id;
  rec.truth = gen.truth;
  rec.wpm = speaking_rate(profile.passage_words, rec.truth.total_duration);
  rec.test = perturb_alignment(rec.reference, profile.base.jitter_sd, rec.seed ^ kJitterStream);
  rec.test.recording_id = rec.recording_id;
  return rec;
}

std::vector<CorpusRecord> generate_corpus(const CorpusProfile& profile) {
  std::vector<CorpusRecord> out;
  out.reserve(profile.count);
  for (std::size_t i = 0; i < profile.count; ++i) out.push_back(generate_record(profile, i));
  return out;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::UnwritableOutput, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorCode::UnwritableOutput, "short write to '" + path.string() + "'");
}

}  // namespace

std::filesystem::path write_corpus(const CorpusProfile& profile, const std::filesystem::path& out_dir,
                                   unsigned jobs) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::UnwritableOutput, "cannot create '" + out_dir.string() + "'");

  std::vector<CorpusRecord> records(profile.count);
  detail::parallel_for(profile.count, jobs, [&](std::size_t i) {
    CorpusRecord rec = generate_record(profile, i);
    const AudioBuffer audio =
        render_audio(rec.reference, rec.target_snr, profile.sample_rate, rec.seed ^ kAudioStream);
    write_wav_file((out_dir / (rec.recording_id + ".wav")).string(), audio);
    write_text(out_dir / (rec.recording_id + ".ref.csv"), format_event_csv(rec.reference));
    write_text(out_dir / (rec.recording_id + ".test.json"), serialize_alignment_json(rec.test));
    records[i] = std::move(rec);
  });

  std::string manifest = "recording_id,speaker_id,group,wpm,wav_path,ref_alignment_path,test_alignment_path\n";
  for (const auto& rec : records) {
    manifest += rec.recording_id + "," + rec.speaker_id + "," + std::string(to_string(rec.group)) + "," +
                detail::format_full(rec.wpm) + "," + rec.recording_id + ".wav," + rec.recording_id +
                ".ref.csv," + rec.recording_id + ".test.json\n";
  }
  const auto manifest_path = out_dir / "manifest.csv";
  write_text(manifest_path, manifest);
  return manifest_path;
}

}  // namespace pausebench
