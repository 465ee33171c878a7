#pragma once

#include <cmath>
#include <cstdint>

namespace pausebench {

// Ingested times live on a microsecond grid.
inline constexpr double kMicrosPerSecond = 1e6;

inline std::int64_t to_micros(double seconds) noexcept {
  return static_cast<std::int64_t>(std::llround(seconds * kMicrosPerSecond));
}

inline double from_micros(std::int64_t micros) noexcept {
  return static_cast<double>(micros) / kMicrosPerSecond;
}

inline double round_to_micros(double seconds) noexcept {
  return from_micros(to_micros(seconds));
}

}  // namespace pausebench
