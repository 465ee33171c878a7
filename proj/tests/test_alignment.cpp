#include <doctest.h>

#include <random>
#include <string>

#include "error_check.hpp"
#include "oracle.hpp"
#include "pausebench/alignment.hpp"
#include "pausebench/events.hpp"

using namespace pausebench;

namespace {

const char* kLongForm = R"(File type = "ooTextFile"
Object class = "TextGrid"

xmin = 0
xmax = 2
tiers? <exists>
size = 1
item []:
    item [1]:
        class = "IntervalTier"
        name = "words"
        xmin = 0
        xmax = 2
        intervals: size = 2
        intervals [1]:
            xmin = 0
            xmax = 1
            text = "bamboo"
        intervals [2]:
            xmin = 1
            xmax = 2
            text = ""
)";

const char* kShortForm = R"(File type = "ooTextFile"
Object class = "TextGrid"

0
2
<exists>
1
"IntervalTier"
"words"
0
2
2
0
1
"bamboo"
1
2
""
)";

std::string utf16(const std::string& ascii_with_utf8, bool little_endian) {
  // Only needs the BMP characters used in the fixtures.
  std::u32string cps;
  for (std::size_t i = 0; i < ascii_with_utf8.size();) {
    const unsigned char c = ascii_with_utf8[i];
    if (c < 0x80) {
      cps += c;
      i += 1;
    } else if ((c & 0xE0) == 0xC0) {
      cps += ((c & 0x1F) << 6) | (ascii_with_utf8[i + 1] & 0x3F);
      i += 2;
    } else {
      cps += ((c & 0x0F) << 12) | ((ascii_with_utf8[i + 1] & 0x3F) << 6) | (ascii_with_utf8[i + 2] & 0x3F);
      i += 3;
    }
  }
  std::string out = little_endian ? std::string("\xFF\xFE") : std::string("\xFE\xFF");
  for (char32_t cp : cps) {
    const char hi = static_cast<char>(cp >> 8), lo = static_cast<char>(cp & 0xFF);
    out += little_endian ? std::string{lo, hi} : std::string{hi, lo};
  }
  return out;
}

std::string three_tiers(const std::string& first_name, const std::string& first_class) {
  return "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n0\n3\n<exists>\n3\n\"" + first_class +
         "\"\n\"" + first_name +
         "\"\n0\n3\n1\n1.5\n\"x\"\n"
         "\"IntervalTier\"\n\"phones\"\n0\n3\n2\n0\n1\n\"b\"\n1\n3\n\"\"\n"
         "\"IntervalTier\"\n\"Words\"\n0\n3\n2\n0\n2\n\"bamboo\"\n2\n3\n\"sp\"\n";
}

}  // namespace

TEST_CASE("parse_textgrid: minimal long form") {
  const AlignmentTrack t = parse_textgrid(kLongForm);
  REQUIRE(t.intervals.size() == 2);
  CHECK(t.intervals[0] == Interval{0.0, 1.0, "bamboo"});
  CHECK(t.intervals[1].start == 1.0);
  CHECK(t.intervals[1].end == 2.0);
  CHECK(is_silence_label(t.intervals[1].label));
  CHECK(t.tier_name == "words");
}

TEST_CASE("parse_textgrid: short form gives the same track") {
  CHECK(parse_textgrid(kShortForm) == parse_textgrid(kLongForm));
}

TEST_CASE("parse_textgrid: UTF-16 labels survive byte for byte") {
  std::string src = kLongForm;
  src.replace(src.find("bamboo"), 6, "caf\xC3\xA9 \xE2\x80\x9Cna\xC3\xAFve\xE2\x80\x9D");
  for (bool le : {true, false}) {
    const AlignmentTrack t = parse_textgrid(utf16(src, le));
    REQUIRE(t.intervals.size() == 2);
    CHECK(t.intervals[0].label == "caf\xC3\xA9 \xE2\x80\x9Cna\xC3\xAFve\xE2\x80\x9D");
  }
  // UTF-8 with BOM
  CHECK(parse_textgrid("\xEF\xBB\xBF" + src).intervals[0].label == "caf\xC3\xA9 \xE2\x80\x9Cna\xC3\xAFve\xE2\x80\x9D");
}

TEST_CASE("parse_textgrid: tier selection") {
  const std::string grid = three_tiers("points", "TextTier");
  CHECK(parse_textgrid(grid).tier_name == "Words");
  CHECK(parse_textgrid(grid, {.tier = "phones"}).intervals[0].label == "b");
  CHECK(error_code_of([&] { parse_textgrid(grid, {.tier = "syllables"}); }) == ErrorCode::TierNotFound);
  CHECK(error_code_of([&] { parse_textgrid(grid, {.tier = "points"}); }) == ErrorCode::PointTierOnly);

  const std::string only_points =
      "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n0\n1\n<exists>\n1\n\"TextTier\"\n\"p\"\n0\n1\n1\n"
      "0.5\n\"x\"\n";
  CHECK(error_code_of([&] { parse_textgrid(only_points); }) == ErrorCode::PointTierOnly);

  std::string no_words = three_tiers("points", "TextTier");
  no_words.replace(no_words.find("\"Words\""), 7, "\"lex\"");
  CHECK(parse_textgrid(no_words).tier_name == "phones");
}

TEST_CASE("parse_textgrid: gaps are filled to the tier extent") {
  const std::string grid =
      "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n0\n4\n<exists>\n1\n\"IntervalTier\"\n\"w\"\n0\n4\n2\n"
      "0.5\n1\n\"a\"\n2\n3\n\"b\"\n";
  const AlignmentTrack t = parse_textgrid(grid);
  REQUIRE(t.intervals.size() == 5);
  CHECK(t.span_start() == 0.0);
  CHECK(t.span_end() == 4.0);
  for (std::size_t i = 1; i < t.intervals.size(); ++i) CHECK(t.intervals[i].start == t.intervals[i - 1].end);
  CHECK(is_silence_label(t.intervals[0].label));
  CHECK(t.intervals[1].label == "a");
  CHECK(is_silence_label(t.intervals[2].label));
}

TEST_CASE("parse_textgrid: errors") {
  CHECK(error_code_of([] { parse_textgrid("hello world"); }) == ErrorCode::NotATextGrid);
  CHECK(error_code_of([] { parse_textgrid(""); }) == ErrorCode::NotATextGrid);
  const std::string overlapping =
      "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n0\n2\n<exists>\n1\n\"IntervalTier\"\n\"w\"\n0\n2\n2\n"
      "0\n1.5\n\"a\"\n1\n2\n\"b\"\n";
  CHECK(error_code_of([&] { parse_textgrid(overlapping); }) == ErrorCode::OverlapDetected);
  std::string truncated = kShortForm;
  truncated.resize(truncated.size() - 10);
  CHECK(error_code_of([&] { parse_textgrid(truncated); }) == ErrorCode::NotATextGrid);
}

TEST_CASE("TextGrid long-form round trip on random tracks") {
  std::mt19937_64 rng(1234);
  for (int i = 0; i < 300; ++i) {
    AlignmentTrack track = oracle::random_track(rng);
    track.tier_name = "words";
    track.recording_id.clear();
    for (auto& iv : track.intervals) {
      if (is_silence_label(iv.label)) iv.label = "";
    }
    const AlignmentTrack parsed = parse_textgrid(serialize_textgrid(track));
    REQUIRE(parsed.intervals.size() == track.intervals.size());
    CHECK(parsed == track);
    CHECK(parse_textgrid(serialize_textgrid(parsed)) == parsed);
  }
}

TEST_CASE("TextGrid labels with quotes round trip") {
  AlignmentTrack t;
  t.tier_name = "words";
  t.intervals = {{0.0, 0.5, "say \"hi\""}, {0.5, 1.25, ""}};
  CHECK(parse_textgrid(serialize_textgrid(t)) == t);
}

TEST_CASE("parse_alignment_json") {
  const AlignmentTrack t = parse_alignment_json(R"({"recording_id":"r1","source":"MFA","intervals":[[0.0,0.42,"thick"]]})");
  CHECK(t.recording_id == "r1");
  CHECK(t.source == AlignmentSource::MFA);
  REQUIRE(t.intervals.size() == 1);
  CHECK(t.intervals[0] == Interval{0.0, 0.42, "thick"});

  CHECK(error_code_of([] {
          parse_alignment_json(R"({"recording_id":"r","source":"MFA","intervals":[[1,2,"b"],[0,1,"a"]]})");
        }) == ErrorCode::SchemaViolation);
  CHECK(error_code_of([] {
          parse_alignment_json(R"({"recording_id":"r","source":"MFA","intervals":[[0,1,"a"],[0.5,1.5,"b"]]})");
        }) == ErrorCode::OverlapDetected);
}

TEST_CASE("parse_alignment_json: schema violations name the field") {
  const auto msg = error_message_of(
      [] { parse_alignment_json(R"({"recording_id":"r","source":"MFA","intervals":[[0,1,"a"],["x",2,"b"]]})"); });
  CHECK(msg.find("/intervals/1/0") != std::string::npos);
  CHECK(error_code_of([] { parse_alignment_json(R"({"source":"MFA","intervals":[]})"); }) ==
        ErrorCode::SchemaViolation);
  CHECK(error_code_of([] { parse_alignment_json(R"({"recording_id":"r","source":"MFA","intervals":[]})"); }) ==
        ErrorCode::EmptyTrack);
  CHECK(error_code_of([] { parse_alignment_json(R"({"recording_id":"r","source":"MFA","intervals":[[0,1]]})"); }) ==
        ErrorCode::SchemaViolation);
  CHECK(error_code_of([] { parse_alignment_json("not json"); }) == ErrorCode::SchemaViolation);
  CHECK(error_code_of([] { parse_alignment_json(R"({"recording_id":"r","source":"MFA","intervals":[[1,1,"a"]]})"); }) ==
        ErrorCode::SchemaViolation);
}

TEST_CASE("canonical JSON round trip and tier field") {
  std::mt19937_64 rng(55);
  for (int i = 0; i < 100; ++i) {
    AlignmentTrack t = oracle::random_track(rng);
    t.source = (i % 2) ? AlignmentSource::Wav2Vec2 : AlignmentSource::MFA;
    t.tier_name = (i % 3) ? "words" : "";
    CHECK(parse_alignment_json(serialize_alignment_json(t)) == t);
  }
  const AlignmentTrack with_tier =
      parse_alignment_json(R"({"recording_id":"r","source":"wav2vec2","tier":"words","intervals":[[0,1,"a"]]})");
  CHECK(with_tier.tier_name == "words");
  CHECK(with_tier.source == AlignmentSource::Wav2Vec2);
}

TEST_CASE("parsing is byte-deterministic") {
  CHECK(parse_textgrid(kLongForm) == parse_textgrid(std::string(kLongForm)));
  const std::string j = R"({"recording_id":"r1","source":"MFA","intervals":[[0.1234567,0.42,"a"],[0.5,0.9,""]]})";
  const AlignmentTrack a = parse_alignment_json(j), b = parse_alignment_json(j);
  CHECK(a == b);
  CHECK(a.intervals[0].start == 0.123457);  // micro-second snap
  CHECK(a.intervals.size() == 3);           // 0.42..0.5 gap filled
}

TEST_CASE("silence label conventions") {
  for (const char* s : {"", "  ", "sil", "SIL", "sp", "Sp", "spn", "<p:>", "<P:>"}) CHECK(is_silence_label(s));
  for (const char* s : {"bamboo", "spa", "silence", "p", "<p>"}) CHECK_FALSE(is_silence_label(s));
}

TEST_CASE("parse_spa_export") {
  const EventSequence s = parse_spa_export("event_type,start_s,end_s\nspeech,0,2\npause,2,3\nspeech,3,5\n", "r");
  REQUIRE(s.events.size() == 3);
  CHECK(s.events[1] == Event{EventKind::Pause, 2.0, 3.0});
  CHECK(s.recording_id == "r");

  CHECK(error_code_of([] { parse_spa_export("event_type,start_s,end_s\nspeech,0,2\nspeech,2,5\n"); }) ==
        ErrorCode::NonAlternatingEvents);
  CHECK(error_code_of([] { parse_spa_export("event_type,start_s,end_s\n"); }) == ErrorCode::EmptyTrack);
  CHECK(error_code_of([] { parse_spa_export("type,start,end\nspeech,0,2\n"); }) == ErrorCode::SchemaViolation);
  CHECK(error_code_of([] { parse_spa_export("event_type,start_s,end_s\nspeech,0,2\npause,2.5,3\n"); }) ==
        ErrorCode::SchemaViolation);
  CHECK(error_code_of([] { parse_spa_export("event_type,start_s,end_s\nword,0,2\n"); }) ==
        ErrorCode::SchemaViolation);
  // CRLF and BOM are tolerated
  CHECK(parse_spa_export("\xEF\xBB\xBF" "event_type,start_s,end_s\r\nspeech,0,2\r\n").events.size() == 1);
}

TEST_CASE("event CSV parse -> emit -> parse identity") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 300; ++i) {
    EventSequence seq = oracle::random_sequence(rng);
    seq.recording_id.clear();
    const std::string csv = format_event_csv(seq);
    const EventSequence once = parse_spa_export(csv);
    CHECK(once.events == seq.events);
    CHECK(format_event_csv(once) == csv);
    CHECK(parse_spa_export(format_event_csv(once)) == once);
  }
}
