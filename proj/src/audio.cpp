#include "pausebench/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>

#include "pausebench/error.hpp"

namespace pausebench {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct WavFormat {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

}  // namespace

AudioBuffer decode_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::MalformedContainer, "missing RIFF/WAVE header");
  }
  const std::uint64_t riff_size = read_u32(bytes.data() + 4);
  if (riff_size + 8 > bytes.size() || riff_size < 4) {
    throw Error(ErrorCode::MalformedContainer, "RIFF size does not match file size");
  }
  const std::size_t end = static_cast<std::size_t>(riff_size + 8);

  std::optional<WavFormat> fmt;
  std::span<const std::uint8_t> data;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= end) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint64_t size = read_u32(chunk + 4);
    if (pos + 8 + size > end) {
      throw Error(ErrorCode::MalformedContainer, "chunk extends past end of RIFF data");
    }
    const std::uint8_t* body = chunk + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw Error(ErrorCode::MalformedContainer, "fmt chunk too small");
      WavFormat f;
      f.tag = read_u16(body);
      f.channels = read_u16(body + 2);
      f.sample_rate = read_u32(body + 4);
      f.block_align = read_u16(body + 12);
      f.bits = read_u16(body + 14);
      if (f.tag == kFormatExtensible) {
        if (size < 40) throw Error(ErrorCode::MalformedContainer, "extensible fmt chunk too small");
        f.tag = read_u16(body + 24);  // first two bytes of the sub-format GUID
      }
      fmt = f;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.subspan(pos + 8, static_cast<std::size_t>(size));
      have_data = true;
    }
    pos += 8 + static_cast<std::size_t>(size) + (size & 1);
  }
  if (!fmt) throw Error(ErrorCode::MalformedContainer, "missing fmt chunk");
  if (!have_data) throw Error(ErrorCode::MalformedContainer, "missing data chunk");

  const bool pcm16 = fmt->tag == kFormatPcm && fmt->bits == 16;
  const bool float32 = fmt->tag == kFormatFloat && fmt->bits == 32;
  if (!pcm16 && !float32) {
    throw Error(ErrorCode::UnsupportedEncoding,
                "format tag " + std::to_string(fmt->tag) + " with " + std::to_string(fmt->bits) +
                    " bits per sample (only PCM16 and Float32 are supported)");
  }
  if (fmt->channels == 0 || fmt->sample_rate == 0) {
    throw Error(ErrorCode::MalformedContainer, "zero channels or sample rate");
  }
  const std::size_t bytes_per_sample = fmt->bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt->channels;
  if (fmt->block_align != frame_bytes) {
    throw Error(ErrorCode::MalformedContainer, "block alignment does not match channel layout");
  }

  AudioBuffer audio;
  audio.sample_rate = fmt->sample_rate;
  const std::size_t frames = data.size() / frame_bytes;
  audio.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const std::uint8_t* frame = data.data() + i * frame_bytes;
    double sum = 0.0;
    for (std::size_t c = 0; c < fmt->channels; ++c) {
      const std::uint8_t* p = frame + c * bytes_per_sample;
      if (pcm16) {
        sum += static_cast<double>(static_cast<std::int16_t>(read_u16(p))) / 32768.0;
      } else {
        const std::uint32_t bits = read_u32(p);
        float v;
        std::memcpy(&v, &bits, sizeof v);
        if (!std::isfinite(v)) throw Error(ErrorCode::MalformedContainer, "non-finite float sample");
        sum += std::clamp(static_cast<double>(v), -1.0, 1.0);
      }
    }
    audio.samples[i] = fmt->channels == 1 ? sum : sum / fmt->channels;
  }
  return audio;
}

AudioBuffer decode_wav(std::string_view bytes) {
  return decode_wav(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(bytes.data()),
                                                  bytes.size()));
}

AudioBuffer read_wav_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_wav(std::span<const std::uint8_t>(bytes));
}

std::vector<std::uint8_t> encode_wav(const AudioBuffer& audio, WavEncoding encoding) {
  const std::uint16_t bits = encoding == WavEncoding::Pcm16 ? 16 : 32;
  const std::uint32_t data_size = static_cast<std::uint32_t>(audio.samples.size() * (bits / 8));
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, encoding == WavEncoding::Pcm16 ? kFormatPcm : kFormatFloat);
  put_u16(out, 1);
  put_u32(out, audio.sample_rate);
  put_u32(out, audio.sample_rate * (bits / 8));
  put_u16(out, bits / 8);
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, data_size);
  for (double x : audio.samples) {
    if (encoding == WavEncoding::Pcm16) {
      const double scaled = std::clamp(std::round(x * 32768.0), -32768.0, 32767.0);
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    } else {
      const float v = static_cast<float>(x);
      std::uint32_t b;
      std::memcpy(&b, &v, sizeof b);
      put_u32(out, b);
    }
  }
  return out;
}

void write_wav_file(const std::string& path, const AudioBuffer& audio, WavEncoding encoding) {
  const auto bytes = encode_wav(audio, encoding);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::UnwritableOutput, "cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::UnwritableOutput, "short write to '" + path + "'");
}

namespace {

std::size_t ms_to_samples(double ms, std::uint32_t rate) {
  return static_cast<std::size_t>(std::llround(ms * rate / 1000.0));
}

// Mean square of every full frame.
std::vector<double> frame_powers(std::span<const double> samples, std::size_t frame, std::size_t hop) {
  std::vector<double> out;
  if (samples.size() < frame) return out;
  out.reserve((samples.size() - frame) / hop + 1);
  for (std::size_t start = 0; start + frame <= samples.size(); start += hop) {
    double ss = 0.0;
    for (std::size_t i = start; i < start + frame; ++i) ss += samples[i] * samples[i];
    out.push_back(ss / static_cast<double>(frame));
  }
  return out;
}

double to_db(double signal, double noise) { return 10.0 * std::log10(signal / noise); }

SnrEstimate finish(double signal, double noise, SnrMethod method) {
  SnrEstimate e;
  e.signal_power = signal;
  e.noise_power = noise;
  e.method = method;
  if (noise == 0.0 && signal > 0.0) {
    e.zero_noise_floor = true;
    e.snr_db = std::numeric_limits<double>::infinity();
  } else if (signal == 0.0) {
    e.snr_db = -std::numeric_limits<double>::infinity();
  } else {
    e.snr_db = to_db(signal, noise);
  }
  return e;
}

SnrEstimate percentile_snr(std::span<const double> samples, std::uint32_t rate, const SnrOptions& options) {
  std::vector<double> powers = frame_powers(samples, ms_to_samples(options.frames.frame_ms, rate),
                                            std::max<std::size_t>(1, ms_to_samples(options.frames.hop_ms, rate)));
  if (powers.empty()) throw Error(ErrorCode::EmptyAudio, "audio is shorter than one analysis frame");
  std::sort(powers.begin(), powers.end());
  const std::size_t f = powers.size();
  const std::size_t k_noise = std::max<std::size_t>(1, static_cast<std::size_t>(options.noise_fraction * f));
  const std::size_t k_signal = std::max<std::size_t>(1, static_cast<std::size_t>(options.signal_fraction * f));
  const double noise = std::accumulate(powers.begin(), powers.begin() + k_noise, 0.0) / k_noise;
  const double signal = std::accumulate(powers.end() - k_signal, powers.end(), 0.0) / k_signal;
  return finish(signal, noise, SnrMethod::Percentile);
}

}  // namespace

std::vector<double> frame_energies(const AudioBuffer& audio, const FrameOptions& options) {
  if (audio.empty()) throw Error(ErrorCode::EmptyAudio, "no samples");
  const std::size_t frame = ms_to_samples(options.frame_ms, audio.sample_rate);
  const std::size_t hop = ms_to_samples(options.hop_ms, audio.sample_rate);
  if (frame < 1 || hop < 1) {
    throw Error(ErrorCode::InvalidArgument, "frame and hop must span at least one sample");
  }
  std::vector<double> rms = frame_powers(audio.samples, frame, hop);
  for (double& p : rms) p = std::sqrt(p);
  return rms;
}

SnrEstimate estimate_snr(const AudioBuffer& audio, const EventSequence* alignment, const SnrOptions& options) {
  if (audio.empty()) throw Error(ErrorCode::EmptyAudio, "no samples");
  const std::uint32_t rate = audio.sample_rate;
  const std::span<const double> all(audio.samples);
  if (!alignment || alignment->empty()) return percentile_snr(all, rate, options);

  constexpr double kSpanTolerance = 0.05;
  if (alignment->span_end() > audio.duration() + kSpanTolerance) {
    throw Error(ErrorCode::InvalidArgument, "alignment extends past the end of the audio");
  }
  auto index = [&](double t) {
    return std::min(audio.size(), static_cast<std::size_t>(std::max<long long>(0, std::llround(t * rate))));
  };

  const auto& events = alignment->events;
  std::size_t first = 0;
  std::size_t last = events.size();
  if (options.span == SnrSpan::Passage) {
    while (first < last && !events[first].is_speech()) ++first;
    while (last > first && !events[last - 1].is_speech()) --last;
  }

  double speech_ss = 0.0, pause_ss = 0.0;
  std::size_t speech_n = 0, pause_n = 0;
  for (std::size_t k = first; k < last; ++k) {
    const std::size_t a = index(events[k].start);
    const std::size_t b = index(events[k].end);
    double ss = 0.0;
    for (std::size_t i = a; i < b; ++i) ss += all[i] * all[i];
    if (events[k].is_speech()) {
      speech_ss += ss;
      speech_n += b - a;
    } else {
      pause_ss += ss;
      pause_n += b - a;
    }
  }
  if (speech_n == 0) throw Error(ErrorCode::NoSpeech, "alignment has no speech inside the audio");
  if (pause_n == 0) {
    if (options.span == SnrSpan::Passage && first < last) {
      const std::size_t a = index(events[first].start);
      const std::size_t b = index(events[last - 1].end);
      return percentile_snr(all.subspan(a, b - a), rate, options);
    }
    return percentile_snr(all, rate, options);
  }
  return finish(speech_ss / speech_n, pause_ss / pause_n, SnrMethod::Alignment);
}

std::string_view to_string(QualityLabel q) noexcept {
  switch (q) {
    case QualityLabel::Poor: return "Poor";
    case QualityLabel::Fair: return "Fair";
    case QualityLabel::Good: return "Good";
  }
  return "Poor";
}

QualityLabel classify_quality(double snr_db) {
  if (!std::isfinite(snr_db)) throw Error(ErrorCode::NonFiniteSnr, "SNR is not finite");
  if (snr_db < kPoorSnrBelow) return QualityLabel::Poor;
  if (snr_db > kGoodSnrAbove) return QualityLabel::Good;
  return QualityLabel::Fair;
}

QualityLabel classify_quality(const SnrEstimate& estimate) {
  if (estimate.zero_noise_floor) return QualityLabel::Good;
  return classify_quality(estimate.snr_db);
}

}  // namespace pausebench
