#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pausebench/events.hpp"

namespace pausebench {

/// Mono audio with samples normalised to [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  std::uint32_t sample_rate = 16000;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  double duration() const noexcept {
    return sample_rate == 0 ? 0.0 : static_cast<double>(samples.size()) / sample_rate;
  }
};

/// Decodes a RIFF/WAVE file holding 16-bit PCM or 32-bit float samples
/// (WAVE_FORMAT_EXTENSIBLE wrappers included). Channels are averaged to mono
/// and integer samples divided by 32768.
AudioBuffer decode_wav(std::span<const std::uint8_t> bytes);
AudioBuffer decode_wav(std::string_view bytes);
AudioBuffer read_wav_file(const std::string& path);

enum class WavEncoding { Pcm16, Float32 };

/// Mono RIFF/WAVE. PCM16 samples are round(x * 32768) clamped to int16.
std::vector<std::uint8_t> encode_wav(const AudioBuffer& audio, WavEncoding encoding = WavEncoding::Pcm16);
void write_wav_file(const std::string& path, const AudioBuffer& audio,
                    WavEncoding encoding = WavEncoding::Pcm16);

struct FrameOptions {
  double frame_ms = 25.0;
  double hop_ms = 10.0;
};

/// RMS of each full analysis frame; a trailing partial frame is dropped so
/// the result has floor((N - frame) / hop) + 1 entries when N >= frame.
std::vector<double> frame_energies(const AudioBuffer& audio, const FrameOptions& options = {});

enum class SnrSpan {
  Full,
  /// First speech onset to last speech offset. Needs an alignment.
  Passage,
};

enum class SnrMethod { Alignment, Percentile };

struct SnrOptions {
  SnrSpan span = SnrSpan::Full;
  FrameOptions frames;
  /// Fraction of quietest frames averaged for the noise power.
  double noise_fraction = 0.10;
  /// Fraction of loudest frames averaged for the signal power.
  double signal_fraction = 0.50;
};

struct SnrEstimate {
  /// +infinity when the noise region is digital silence.
  double snr_db = 0.0;
  double signal_power = 0.0;
  double noise_power = 0.0;
  SnrMethod method = SnrMethod::Alignment;
  bool zero_noise_floor = false;
};

/// With an alignment, signal power is the mean square over speech events and
/// noise power the mean square over pauses. Without one (or when the
/// alignment has no pause inside the analysed span), the percentile
/// estimator over frame energies is used.
SnrEstimate estimate_snr(const AudioBuffer& audio, const EventSequence* alignment = nullptr,
                         const SnrOptions& options = {});

enum class QualityLabel { Poor, Fair, Good };

std::string_view to_string(QualityLabel q) noexcept;

inline constexpr double kPoorSnrBelow = 15.0;
inline constexpr double kGoodSnrAbove = 20.0;

/// < 15 dB Poor, 15..20 dB inclusive Fair, > 20 dB Good.
QualityLabel classify_quality(double snr_db);

/// Like classify_quality, but a zero noise floor counts as Good.
QualityLabel classify_quality(const SnrEstimate& estimate);

}  // namespace pausebench
