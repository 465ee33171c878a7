#pragma once

// Hand-assembled RIFF/WAVE bytes for decoder tests.

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

namespace fixture {

inline void u16(std::string& s, std::uint16_t v) {
  s += static_cast<char>(v & 0xFF);
  s += static_cast<char>(v >> 8);
}

inline void u32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s += static_cast<char>((v >> (8 * i)) & 0xFF);
}

inline std::string wav(std::uint16_t format, std::uint16_t channels, std::uint32_t rate, std::uint16_t bits,
                       const std::string& data, bool extensible = false) {
  std::string fmt;
  u16(fmt, extensible ? 0xFFFE : format);
  u16(fmt, channels);
  u32(fmt, rate);
  u32(fmt, rate * channels * bits / 8);
  u16(fmt, static_cast<std::uint16_t>(channels * bits / 8));
  u16(fmt, bits);
  if (extensible) {
    u16(fmt, 22);
    u16(fmt, bits);
    u32(fmt, 0x4);
    u16(fmt, format);
    fmt += std::string("\x00\x00\x00\x00\x10\x00\x80\x00\x00\xAA\x00\x38\x9B\x71", 14);
  }
  std::string body = "WAVE";
  body += "fmt ";
  u32(body, static_cast<std::uint32_t>(fmt.size()));
  body += fmt;
  body += "LIST";  // an unrelated chunk the decoder must skip
  u32(body, 3);
  body += std::string("abc\0", 4);
  body += "data";
  u32(body, static_cast<std::uint32_t>(data.size()));
  body += data;
  std::string out = "RIFF";
  u32(out, static_cast<std::uint32_t>(body.size()));
  return out + body;
}

inline std::string pcm16(const std::vector<std::int16_t>& samples) {
  std::string s;
  for (auto v : samples) u16(s, static_cast<std::uint16_t>(v));
  return s;
}

inline std::string f32(const std::vector<float>& samples) {
  std::string s;
  for (float v : samples) {
    std::uint32_t b;
    std::memcpy(&b, &v, 4);
    u32(s, b);
  }
  return s;
}

}  // namespace fixture
