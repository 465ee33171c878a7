#include "pausebench/alignment.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <variant>

#include <nlohmann/json.hpp>

#include "csv.hpp"
#include "pausebench/timing.hpp"

namespace pausebench {

std::string_view to_string(AlignmentSource source) noexcept {
  switch (source) {
    case AlignmentSource::Wav2Vec2: return "Wav2Vec2";
    case AlignmentSource::MFA: return "MFA";
    case AlignmentSource::SPA: return "SPA";
    case AlignmentSource::Other: return "Other";
  }
  return "Other";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

AlignmentSource parse_alignment_source(std::string_view name) noexcept {
  const std::string n = lower(name);
  if (n == "wav2vec2" || n == "charsiu") return AlignmentSource::Wav2Vec2;
  if (n == "mfa") return AlignmentSource::MFA;
  if (n == "spa") return AlignmentSource::SPA;
  return AlignmentSource::Other;
}

bool is_silence_label(std::string_view label) noexcept {
  const std::string_view t = detail::trim(label);
  if (t.empty()) return true;
  const std::string n = lower(t);
  return n == "sil" || n == "sp" || n == "spn" || n == "<p:>";
}

void normalize_track(AlignmentTrack& track, std::string_view origin, ErrorCode order_error) {
  auto where = [&](std::size_t i) {
    return std::string(origin) + "/" + std::to_string(i);
  };
  std::vector<Interval> filled;
  filled.reserve(track.intervals.size());
  for (std::size_t i = 0; i < track.intervals.size(); ++i) {
    Interval iv = std::move(track.intervals[i]);
    if (!std::isfinite(iv.start) || !std::isfinite(iv.end) || iv.start < 0.0) {
      throw Error(ErrorCode::SchemaViolation, where(i) + ": times must be finite and >= 0");
    }
    iv.start = round_to_micros(iv.start);
    iv.end = round_to_micros(iv.end);
    if (iv.end <= iv.start) {
      throw Error(ErrorCode::SchemaViolation, where(i) + ": end must be greater than start");
    }
    if (!filled.empty()) {
      const Interval& prev = filled.back();
      if (iv.start < prev.start) {
        throw Error(order_error, where(i) + ": intervals are not sorted by start time");
      }
      if (iv.start < prev.end) {
        throw Error(ErrorCode::OverlapDetected,
                    where(i) + ": interval overlaps the previous one");
      }
      if (iv.start > prev.end) filled.push_back({prev.end, iv.start, ""});
    }
    filled.push_back(std::move(iv));
  }
  track.intervals = std::move(filled);
}

// ---------------------------------------------------------------------------
// TextGrid

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string utf16_to_utf8(std::string_view bytes, bool big_endian) {
  if (bytes.size() % 2 != 0) {
    throw Error(ErrorCode::NotATextGrid, "UTF-16 content has an odd byte count");
  }
  auto unit = [&](std::size_t i) -> std::uint32_t {
    const auto b0 = static_cast<unsigned char>(bytes[i]);
    const auto b1 = static_cast<unsigned char>(bytes[i + 1]);
    return big_endian ? (b0 << 8) | b1 : (b1 << 8) | b0;
  };
  std::string out;
  out.reserve(bytes.size() / 2);
  for (std::size_t i = 0; i < bytes.size(); i += 2) {
    std::uint32_t cp = unit(i);
    if (cp >= 0xD800 && cp <= 0xDBFF) {
      if (i + 3 >= bytes.size()) throw Error(ErrorCode::NotATextGrid, "truncated surrogate pair");
      const std::uint32_t lo = unit(i + 2);
      if (lo < 0xDC00 || lo > 0xDFFF) throw Error(ErrorCode::NotATextGrid, "invalid surrogate pair");
      cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
      i += 2;
    } else if (cp >= 0xDC00 && cp <= 0xDFFF) {
      throw Error(ErrorCode::NotATextGrid, "unpaired low surrogate");
    }
    append_utf8(out, cp);
  }
  return out;
}

std::string decode_text(std::string_view bytes) {
  if (bytes.size() >= 2 && bytes[0] == '\xFF' && bytes[1] == '\xFE') {
    return utf16_to_utf8(bytes.substr(2), false);
  }
  if (bytes.size() >= 2 && bytes[0] == '\xFE' && bytes[1] == '\xFF') {
    return utf16_to_utf8(bytes.substr(2), true);
  }
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  return std::string(bytes);
}

struct Flag {
  std::string text;  // e.g. "exists"
};
using Token = std::variant<double, std::string, Flag>;

// Reduces both the long ("key = value") and short (values only) text forms
// to the same stream of numbers, quoted strings and <flags>. Keys, "=",
// bracketed indices such as "[1]" and "!" comments are discarded.
std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (i < n) {
    const char c = text[i];
    if (is_space(c)) {
      ++i;
    } else if (c == '"') {
      std::string s;
      ++i;
      bool closed = false;
      while (i < n) {
        if (text[i] == '"') {
          if (i + 1 < n && text[i + 1] == '"') {
            s += '"';
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        s += text[i++];
      }
      if (!closed) throw Error(ErrorCode::NotATextGrid, "unterminated string");
      tokens.emplace_back(std::move(s));
    } else if (c == '!') {
      while (i < n && text[i] != '\n') ++i;
    } else if (c == '[') {
      while (i < n && text[i] != ']') ++i;
      ++i;
    } else if (c == '<') {
      const std::size_t close = text.find('>', i);
      if (close == std::string_view::npos) throw Error(ErrorCode::NotATextGrid, "unterminated flag");
      tokens.emplace_back(Flag{std::string(text.substr(i + 1, close - i - 1))});
      i = close + 1;
    } else {
      const std::size_t start = i;
      while (i < n && !is_space(text[i]) && text[i] != '"' && text[i] != '[') ++i;
      if (auto v = detail::parse_double(text.substr(start, i - start))) tokens.emplace_back(*v);
    }
  }
  return tokens;
}

class TokenReader {
 public:
  explicit TokenReader(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  double number(const char* what) {
    const Token& t = next(what);
    if (const auto* d = std::get_if<double>(&t)) return *d;
    throw Error(ErrorCode::NotATextGrid, std::string("expected a number for ") + what);
  }
  std::string string(const char* what) {
    const Token& t = next(what);
    if (const auto* s = std::get_if<std::string>(&t)) return *s;
    throw Error(ErrorCode::NotATextGrid, std::string("expected a string for ") + what);
  }
  std::size_t count(const char* what) {
    const double d = number(what);
    if (d < 0 || d != static_cast<double>(static_cast<std::size_t>(d))) {
      throw Error(ErrorCode::NotATextGrid, std::string("invalid count for ") + what);
    }
    return static_cast<std::size_t>(d);
  }
  std::optional<Flag> flag() {
    if (pos_ < tokens_.size()) {
      if (const auto* f = std::get_if<Flag>(&tokens_[pos_])) {
        ++pos_;
        return *f;
      }
    }
    return std::nullopt;
  }

 private:
  const Token& next(const char* what) {
    if (pos_ >= tokens_.size()) {
      throw Error(ErrorCode::NotATextGrid, std::string("unexpected end of file reading ") + what);
    }
    return tokens_[pos_++];
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

struct RawTier {
  std::string name;
  double xmin = 0.0;
  double xmax = 0.0;
  std::vector<Interval> intervals;
};

}  // namespace

AlignmentTrack parse_textgrid(std::string_view bytes, const TextGridOptions& options) {
  const std::string text = decode_text(bytes);
  if (text.find("ooTextFile") == std::string::npos) {
    throw Error(ErrorCode::NotATextGrid, "missing ooTextFile header");
  }
  TokenReader reader(tokenize(text));
  if (reader.string("file type") != "ooTextFile" || reader.string("object class") != "TextGrid") {
    throw Error(ErrorCode::NotATextGrid, "object class is not TextGrid");
  }
  reader.number("xmin");
  reader.number("xmax");
  const auto tiers_flag = reader.flag();
  std::vector<RawTier> tiers;
  std::size_t point_tiers = 0;
  std::vector<std::string> point_names;
  if (!tiers_flag || tiers_flag->text == "exists") {
    const std::size_t size = reader.count("tier count");
    for (std::size_t t = 0; t < size; ++t) {
      const std::string cls = reader.string("tier class");
      RawTier tier;
      tier.name = reader.string("tier name");
      tier.xmin = reader.number("tier xmin");
      tier.xmax = reader.number("tier xmax");
      const std::size_t items = reader.count("tier size");
      if (cls == "IntervalTier") {
        tier.intervals.reserve(items);
        for (std::size_t k = 0; k < items; ++k) {
          Interval iv;
          iv.start = reader.number("interval xmin");
          iv.end = reader.number("interval xmax");
          iv.label = reader.string("interval text");
          tier.intervals.push_back(std::move(iv));
        }
        tiers.push_back(std::move(tier));
      } else if (cls == "TextTier") {
        point_names.push_back(tier.name);
        for (std::size_t k = 0; k < items; ++k) {
          reader.number("point time");
          reader.string("point mark");
        }
        ++point_tiers;
      } else {
        throw Error(ErrorCode::NotATextGrid, "unknown tier class '" + cls + "'");
      }
    }
  }
  if (tiers.empty()) {
    if (point_tiers > 0) throw Error(ErrorCode::PointTierOnly, "file has no interval tiers");
    throw Error(ErrorCode::TierNotFound, "file has no tiers");
  }

  const RawTier* chosen = nullptr;
  if (options.tier) {
    for (const auto& t : tiers) {
      if (t.name == *options.tier) {
        chosen = &t;
        break;
      }
    }
    if (!chosen && std::find(point_names.begin(), point_names.end(), *options.tier) != point_names.end()) {
      throw Error(ErrorCode::PointTierOnly, "tier '" + *options.tier + "' is a point tier");
    }
    if (!chosen) throw Error(ErrorCode::TierNotFound, "no interval tier named '" + *options.tier + "'");
  } else {
    for (const auto& t : tiers) {
      if (lower(t.name) == "words") {
        chosen = &t;
        break;
      }
    }
    if (!chosen) chosen = &tiers.front();
  }

  AlignmentTrack track;
  track.recording_id = options.recording_id;
  track.source = options.source;
  track.tier_name = chosen->name;
  track.intervals = chosen->intervals;
  normalize_track(track, "tier '" + chosen->name + "'", ErrorCode::OverlapDetected);

  // Extend to the tier bounds so the track tiles [xmin, xmax].
  const double xmin = round_to_micros(chosen->xmin);
  const double xmax = round_to_micros(chosen->xmax);
  if (track.intervals.empty()) {
    if (xmax > xmin) track.intervals.push_back({xmin, xmax, ""});
  } else {
    if (xmin < track.intervals.front().start) {
      track.intervals.insert(track.intervals.begin(), {xmin, track.intervals.front().start, ""});
    }
    if (xmax > track.intervals.back().end) {
      track.intervals.push_back({track.intervals.back().end, xmax, ""});
    }
  }
  return track;
}

namespace {

std::string quote_praat(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string serialize_textgrid(const AlignmentTrack& track) {
  const double xmin = track.span_start();
  const double xmax = track.span_end();
  const std::string name = track.tier_name.empty() ? "words" : track.tier_name;
  auto num = [](double v) { return detail::format_fixed(v, 6); };

  std::string out;
  out += "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n\n";
  out += "xmin = " + num(xmin) + " \nxmax = " + num(xmax) + " \ntiers? <exists> \nsize = 1 \nitem []: \n";
  out += "    item [1]:\n        class = \"IntervalTier\" \n";
  out += "        name = " + quote_praat(name) + " \n";
  out += "        xmin = " + num(xmin) + " \n        xmax = " + num(xmax) + " \n";
  out += "        intervals: size = " + std::to_string(track.intervals.size()) + " \n";
  for (std::size_t i = 0; i < track.intervals.size(); ++i) {
    const Interval& iv = track.intervals[i];
    out += "        intervals [" + std::to_string(i + 1) + "]:\n";
    out += "            xmin = " + num(iv.start) + " \n";
    out += "            xmax = " + num(iv.end) + " \n";
    out += "            text = " + quote_praat(iv.label) + " \n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical JSON

AlignmentTrack parse_alignment_json(std::string_view bytes) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("/: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::SchemaViolation, "/: expected an object");

  auto require_string = [&](const char* key, bool optional) -> std::optional<std::string> {
    const auto it = doc.find(key);
    if (it == doc.end()) {
      if (optional) return std::nullopt;
      throw Error(ErrorCode::SchemaViolation, std::string("/") + key + ": missing");
    }
    if (!it->is_string()) {
      throw Error(ErrorCode::SchemaViolation, std::string("/") + key + ": expected a string");
    }
    return it->get<std::string>();
  };

  AlignmentTrack track;
  track.recording_id = *require_string("recording_id", false);
  track.source = parse_alignment_source(*require_string("source", false));
  track.tier_name = require_string("tier", true).value_or("");

  const auto it = doc.find("intervals");
  if (it == doc.end()) throw Error(ErrorCode::SchemaViolation, "/intervals: missing");
  if (!it->is_array()) throw Error(ErrorCode::SchemaViolation, "/intervals: expected an array");
  for (std::size_t i = 0; i < it->size(); ++i) {
    const json& entry = (*it)[i];
    const std::string path = "/intervals/" + std::to_string(i);
    if (!entry.is_array() || entry.size() != 3) {
      throw Error(ErrorCode::SchemaViolation, path + ": expected [start, end, label]");
    }
    if (!entry[0].is_number()) throw Error(ErrorCode::SchemaViolation, path + "/0: expected a number");
    if (!entry[1].is_number()) throw Error(ErrorCode::SchemaViolation, path + "/1: expected a number");
    if (!entry[2].is_string()) throw Error(ErrorCode::SchemaViolation, path + "/2: expected a string");
    track.intervals.push_back({entry[0].get<double>(), entry[1].get<double>(), entry[2].get<std::string>()});
  }
  if (track.intervals.empty()) throw Error(ErrorCode::EmptyTrack, "/intervals: no intervals");
  normalize_track(track, "/intervals");
  return track;
}

std::string serialize_alignment_json(const AlignmentTrack& track) {
  nlohmann::ordered_json doc;
  doc["recording_id"] = track.recording_id;
  doc["source"] = std::string(to_string(track.source));
  if (!track.tier_name.empty()) doc["tier"] = track.tier_name;
  auto intervals = nlohmann::ordered_json::array();
  for (const auto& iv : track.intervals) {
    intervals.push_back({iv.start, iv.end, iv.label});
  }
  doc["intervals"] = std::move(intervals);
  return doc.dump() + "\n";
}

}  // namespace pausebench
