#include "pausebench/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "csv.hpp"
#include "parallel.hpp"
#include "pausebench/alignment.hpp"
#include "pausebench/error.hpp"
#include "pausebench/version.hpp"

namespace pausebench {

namespace fs = std::filesystem;

void write_text_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::UnwritableOutput, "cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::UnwritableOutput, "short write to '" + path.string() + "'");
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Manifest

std::vector<RecordingRecord> parse_manifest(std::string_view text, const fs::path& base_dir) {
  static constexpr std::array<std::string_view, 7> kColumns = {
      "recording_id", "speaker_id", "group", "wpm", "wav_path", "ref_alignment_path", "test_alignment_path"};
  const auto rows = detail::parse_csv(text);
  if (rows.empty()) throw Error(ErrorCode::EmptyManifest, "manifest is empty");
  const auto& header = rows.front();
  if (header.size() != kColumns.size() || !std::equal(header.begin(), header.end(), kColumns.begin())) {
    throw Error(ErrorCode::SchemaViolation,
                "manifest header must be recording_id,speaker_id,group,wpm,wav_path,ref_alignment_path,"
                "test_alignment_path");
  }
  auto resolve = [&](const std::string& p) -> fs::path {
    if (p.empty()) return {};
    const fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  std::vector<RecordingRecord> records;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    const std::string where = "manifest row " + std::to_string(r);
    if (row.size() != kColumns.size()) throw Error(ErrorCode::SchemaViolation, where + ": expected 7 fields");
    RecordingRecord rec;
    rec.recording_id = row[0];
    if (rec.recording_id.empty()) throw Error(ErrorCode::SchemaViolation, where + ": empty recording_id");
    if (!seen.insert(rec.recording_id).second) {
      throw Error(ErrorCode::SchemaViolation, where + ": duplicate recording_id '" + rec.recording_id + "'");
    }
    rec.speaker_id = row[1];
    const auto group = parse_group(detail::trim(row[2]));
    if (!group) throw Error(ErrorCode::SchemaViolation, where + ": group must be HC or ALS");
    rec.group = *group;
    if (!detail::trim(row[3]).empty()) {
      const auto wpm = detail::parse_double(row[3]);
      if (!wpm) throw Error(ErrorCode::SchemaViolation, where + ": wpm is not a number");
      rec.wpm = *wpm;
    }
    rec.wav_path = resolve(row[4]);
    rec.ref_alignment_path = resolve(row[5]);
    rec.test_alignment_path = resolve(row[6]);
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw Error(ErrorCode::EmptyManifest, "manifest has no records");
  return records;
}

std::vector<RecordingRecord> read_manifest(const fs::path& path) {
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  return parse_manifest(read_text_file(path), base);
}

// ---------------------------------------------------------------------------
// Per-record processing

namespace {

enum class AlignmentFormat { SpaCsv, Json, TextGrid };

std::string lower_ext(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

AlignmentFormat detect_format(const fs::path& path, std::string_view content) {
  const std::string ext = lower_ext(path);
  if (ext == ".csv") return AlignmentFormat::SpaCsv;
  if (ext == ".json") return AlignmentFormat::Json;
  if (ext == ".textgrid") return AlignmentFormat::TextGrid;
  const std::string_view head = detail::trim(content.substr(0, 256));
  if (!head.empty() && head.front() == '{') return AlignmentFormat::Json;
  if (head.substr(0, 10) == "event_type") return AlignmentFormat::SpaCsv;
  return AlignmentFormat::TextGrid;
}

}  // namespace

EventSequence load_event_sequence(const fs::path& path, const SegmentOptions& segment_options,
                                  const std::optional<std::string>& tier, const std::string& recording_id) {
  const std::string content = read_text_file(path);
  const std::string id = recording_id.empty() ? path.stem().string() : recording_id;
  switch (detect_format(path, content)) {
    case AlignmentFormat::SpaCsv:
      return parse_spa_export(content, id);
    case AlignmentFormat::Json: {
      AlignmentTrack track = parse_alignment_json(content);
      if (!recording_id.empty()) track.recording_id = recording_id;
      return segment(track, segment_options);
    }
    case AlignmentFormat::TextGrid: {
      TextGridOptions opts;
      opts.tier = tier;
      opts.recording_id = id;
      return segment(parse_textgrid(content, opts), segment_options);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown alignment format");
}

ProcessedRecords process_records(const std::vector<RecordingRecord>& manifest, const ValidationConfig& config) {
  struct Slot {
    std::optional<RecordSummary> summary;
    std::string reason;
  };
  std::vector<Slot> slots(manifest.size());
  detail::parallel_for(manifest.size(), config.jobs, [&](std::size_t i) {
    const RecordingRecord& rec = manifest[i];
    Slot& slot = slots[i];
    try {
      RecordSummary s;
      s.record = rec;
      const EventSequence ref = load_event_sequence(rec.ref_alignment_path, config.segment, config.tier, rec.recording_id);
      const EventSequence test =
          load_event_sequence(rec.test_alignment_path, config.segment, config.tier, rec.recording_id);
      s.reference = extract_features(ref, config.features);
      s.test = extract_features(test, config.features);
      if (rec.wav_path.empty()) throw Error(ErrorCode::IoError, "no wav_path given");
      const AudioBuffer audio = read_wav_file(rec.wav_path.string());
      s.snr = estimate_snr(audio, &ref, config.snr);
      s.quality = classify_quality(s.snr);
      s.severity = classify_severity(rec.group, rec.wpm);
      slot.summary = std::move(s);
    } catch (const std::exception& e) {
      slot.reason = e.what();
    }
  });

  ProcessedRecords out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].summary) {
      out.used.push_back(std::move(*slots[i].summary));
    } else {
      out.excluded.push_back({manifest[i].recording_id, std::move(slots[i].reason)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aggregation

namespace {

template <typename Pred>
std::array<CorrelationCell, kFeatureCount> correlate(const std::vector<RecordSummary>& records, Pred in_stratum,
                                                     const SpearmanOptions& options) {
  std::array<CorrelationCell, kFeatureCount> cells;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const Feature feature = kAllFeatures[f];
    std::vector<std::optional<double>> ref;
    std::vector<std::optional<double>> test;
    for (const auto& r : records) {
      if (!in_stratum(r)) continue;
      ref.push_back(r.reference.get(feature));
      test.push_back(r.test.get(feature));
    }
    CorrelationCell& cell = cells[f];
    for (std::size_t i = 0; i < ref.size(); ++i) {
      if (ref[i] && test[i]) ++cell.n;
    }
    try {
      cell.result = spearman(std::span<const std::optional<double>>(test), std::span<const std::optional<double>>(ref),
                             options);
    } catch (const Error& e) {
      cell.reason = std::string(to_string(e.code()));
    }
  }
  return cells;
}

}  // namespace

ValidityReport build_report(ProcessedRecords processed, const ValidationConfig& config) {
  if (processed.used.empty()) {
    throw Error(ErrorCode::AllRecordsExcluded,
                std::to_string(processed.excluded.size()) + " of " + std::to_string(processed.excluded.size()) +
                    " records were excluded");
  }
  ValidityReport report;
  report.records_in = processed.used.size() + processed.excluded.size();
  report.pause_threshold = config.segment.pause_threshold;
  report.min_speech = config.segment.min_speech;
  report.pvalue_method = config.spearman.method;
  report.sd_convention = config.features.sd;

  const auto& used = processed.used;
  const std::string subset = config.all_quality ? "all" : "Good";
  auto in_subset = [&](const RecordSummary& r) { return config.all_quality || r.quality == QualityLabel::Good; };

  report.quality.name = "quality";
  report.quality.subset = "all";
  for (QualityLabel q : {QualityLabel::Good, QualityLabel::Fair, QualityLabel::Poor}) {
    auto pred = [q](const RecordSummary& r) { return r.quality == q; };
    report.quality.strata.emplace_back(to_string(q));
    report.quality.stratum_sizes.push_back(static_cast<std::size_t>(std::count_if(used.begin(), used.end(), pred)));
    report.quality.cells.push_back(correlate(used, pred, config.spearman));
  }

  report.severity.name = "severity";
  report.severity.subset = subset;
  for (SeverityLabel s : {SeverityLabel::HC, SeverityLabel::Mild, SeverityLabel::Moderate, SeverityLabel::Severe}) {
    auto pred = [&, s](const RecordSummary& r) { return in_subset(r) && r.severity == s; };
    report.severity.strata.emplace_back(to_string(s));
    report.severity.stratum_sizes.push_back(static_cast<std::size_t>(std::count_if(used.begin(), used.end(), pred)));
    report.severity.cells.push_back(correlate(used, pred, config.spearman));
  }

  report.bland_altman_subset = subset;
  for (Feature f : config.bland_altman_features) {
    BlandAltmanEntry entry;
    entry.feature = f;
    std::vector<std::optional<double>> test;
    std::vector<std::optional<double>> ref;
    for (const auto& r : used) {
      if (!in_subset(r)) continue;
      test.push_back(r.test.get(f));
      ref.push_back(r.reference.get(f));
      if (test.back() && ref.back()) ++entry.n;
    }
    try {
      entry.result = bland_altman(std::span<const std::optional<double>>(test), std::span<const std::optional<double>>(ref));
    } catch (const Error& e) {
      entry.reason = std::string(to_string(e.code()));
    }
    report.bland_altman.push_back(std::move(entry));
  }

  std::map<std::string, std::size_t> speakers;
  for (const auto& r : used) {
    if (!r.record.speaker_id.empty()) ++speakers[r.record.speaker_id];
  }
  for (const auto& [speaker, count] : speakers) {
    if (count > 1) report.repeated_speakers.push_back(speaker);
  }

  report.records = std::move(processed.used);
  report.exclusions = std::move(processed.excluded);
  return report;
}

ValidityReport run_validation(const std::vector<RecordingRecord>& manifest, const ValidationConfig& config) {
  if (manifest.empty()) throw Error(ErrorCode::EmptyManifest, "manifest has no records");
  return build_report(process_records(manifest, config), config);
}

// ---------------------------------------------------------------------------
// Tables

std::string format_p_value(double p) {
  if (p < 0.001) return "<.001";
  return detail::format_fixed(p, 2);
}

std::string format_rho(double rho) {
  std::string s = detail::format_fixed(rho, 2);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string format_table(const StratifiedTable& table, TableFormat format) {
  std::string out;
  const std::size_t strata = table.strata.size();
  auto heading = [&](std::size_t s) { return table.strata[s] + " (" + std::to_string(table.stratum_sizes[s]) + ")"; };

  if (format == TableFormat::Csv) {
    out += "feature";
    for (std::size_t s = 0; s < strata; ++s) {
      const std::string h = heading(s);
      out += "," + detail::csv_escape(h + " rho") + "," + detail::csv_escape(h + " p") + "," +
             detail::csv_escape(h + " n") + "," + detail::csv_escape(h + " note");
    }
    out += "\n";
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      out += feature_name(kAllFeatures[f]);
      for (std::size_t s = 0; s < strata; ++s) {
        const CorrelationCell& cell = table.cells[s][f];
        if (cell.result) {
          out += "," + detail::format_full(cell.result->rho) + "," + detail::format_full(cell.result->p_value);
        } else {
          out += ",,";
        }
        out += "," + std::to_string(cell.n) + "," + detail::csv_escape(cell.reason);
      }
      out += "\n";
    }
    return out;
  }

  out += "| Feature |";
  for (std::size_t s = 0; s < strata; ++s) out += " " + heading(s) + " |";
  out += "\n|---|";
  for (std::size_t s = 0; s < strata; ++s) out += "---|";
  out += "\n";
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    out += "| " + std::string(feature_label(kAllFeatures[f])) + " |";
    for (std::size_t s = 0; s < strata; ++s) {
      const CorrelationCell& cell = table.cells[s][f];
      std::string text;
      if (cell.result) {
        text = format_rho(cell.result->rho) + " / " + format_p_value(cell.result->p_value);
        if (cell.n != table.stratum_sizes[s]) text += " (n=" + std::to_string(cell.n) + ")";
      }
      out += " " + text + " |";
    }
    out += "\n";
  }
  return out;
}

std::string format_exclusions_csv(const std::vector<Exclusion>& exclusions) {
  std::string out = "recording_id,reason\n";
  for (const auto& e : exclusions) out += detail::csv_escape(e.recording_id) + "," + detail::csv_escape(e.reason) + "\n";
  return out;
}

namespace {

nlohmann::ordered_json optional_number(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

nlohmann::ordered_json features_json(const FeatureVector& fv) {
  nlohmann::ordered_json j;
  for (Feature f : kAllFeatures) j[std::string(feature_name(f))] = optional_number(fv.get(f));
  return j;
}

nlohmann::ordered_json table_json(const StratifiedTable& table) {
  nlohmann::ordered_json j;
  j["subset"] = table.subset;
  auto strata = nlohmann::ordered_json::array();
  for (std::size_t s = 0; s < table.strata.size(); ++s) {
    nlohmann::ordered_json st;
    st["name"] = table.strata[s];
    st["n"] = table.stratum_sizes[s];
    nlohmann::ordered_json cells;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      const CorrelationCell& cell = table.cells[s][f];
      nlohmann::ordered_json c;
      c["n"] = cell.n;
      if (cell.result) {
        c["rho"] = cell.result->rho;
        c["p_value"] = cell.result->p_value;
        c["significant"] = cell.result->significant;
      } else {
        c["rho"] = nullptr;
        c["p_value"] = nullptr;
        c["reason"] = cell.reason;
      }
      cells[std::string(feature_name(kAllFeatures[f]))] = std::move(c);
    }
    st["cells"] = std::move(cells);
    strata.push_back(std::move(st));
  }
  j["strata"] = std::move(strata);
  return j;
}

}  // namespace

std::string format_report_json(const ValidityReport& report, const std::string& generated_at) {
  nlohmann::ordered_json j;
  j["metadata"] = {
      {"toolkit_version", kVersion},
      {"generated_at", generated_at},
      {"pause_threshold_s", report.pause_threshold},
      {"min_speech_s", report.min_speech},
      {"pvalue_method", std::string(to_string(report.pvalue_method))},
      {"sd_convention", report.sd_convention == SdConvention::Sample ? "sample" : "population"},
      {"significance_level", kSignificanceLevel},
  };
  j["counts"] = {
      {"records_in", report.records_in},
      {"records_used", report.records.size()},
      {"records_excluded", report.exclusions.size()},
  };
  j["repeated_speakers"] = report.repeated_speakers;
  j["quality_table"] = table_json(report.quality);
  j["severity_table"] = table_json(report.severity);

  auto ba = nlohmann::ordered_json::array();
  for (const auto& e : report.bland_altman) {
    nlohmann::ordered_json b;
    b["feature"] = std::string(feature_name(e.feature));
    b["subset"] = report.bland_altman_subset;
    b["n"] = e.n;
    if (e.result) {
      b["bias"] = e.result->bias;
      b["sd"] = e.result->sd;
      b["loa_low"] = e.result->loa_low;
      b["loa_high"] = e.result->loa_high;
    } else {
      b["reason"] = e.reason;
    }
    ba.push_back(std::move(b));
  }
  j["bland_altman"] = std::move(ba);

  auto recs = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    nlohmann::ordered_json o;
    o["recording_id"] = r.record.recording_id;
    o["speaker_id"] = r.record.speaker_id;
    o["group"] = std::string(to_string(r.record.group));
    o["wpm"] = optional_number(r.record.wpm);
    o["snr_db"] = optional_number(r.snr.snr_db);
    o["zero_noise_floor"] = r.snr.zero_noise_floor;
    o["quality"] = std::string(to_string(r.quality));
    o["severity"] = std::string(to_string(r.severity));
    o["reference"] = features_json(r.reference);
    o["test"] = features_json(r.test);
    recs.push_back(std::move(o));
  }
  j["records"] = std::move(recs);

  auto ex = nlohmann::ordered_json::array();
  for (const auto& e : report.exclusions) ex.push_back({{"recording_id", e.recording_id}, {"reason", e.reason}});
  j["exclusions"] = std::move(ex);
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Bland-Altman SVG

namespace {

std::string px(double v) { return detail::format_fixed(v, 2); }

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo;
  double hi;
};

// Data extent padded by 5% on each side; a degenerate extent gets +-1.
Range padded_range(double lo, double hi) {
  double span = hi - lo;
  if (span <= 0.0) {
    const double pad = std::abs(lo) > 0.0 ? 0.05 * std::abs(lo) : 1.0;
    return {lo - pad, hi + pad};
  }
  return {lo - 0.05 * span, hi + 0.05 * span};
}

}  // namespace

std::string render_bland_altman_svg(const BlandAltmanResult& result, std::string_view feature_name,
                                    std::string_view unit) {
  if (result.points.size() < 2) throw Error(ErrorCode::TooFewPairs, "Bland-Altman plot needs at least 2 points");

  constexpr double kWidth = 640, kHeight = 480;
  constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  double xlo = result.points.front().mean, xhi = xlo;
  double ylo = std::min({0.0, result.loa_low, result.bias});
  double yhi = std::max({0.0, result.loa_high, result.bias});
  for (const auto& p : result.points) {
    xlo = std::min(xlo, p.mean);
    xhi = std::max(xhi, p.mean);
    ylo = std::min(ylo, p.difference);
    yhi = std::max(yhi, p.difference);
  }
  const Range xr = padded_range(xlo, xhi);
  const Range yr = padded_range(ylo, yhi);
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto sy = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * plot_h; };

  const std::string units = unit.empty() ? "" : " (" + std::string(unit) + ")";
  const std::string name = xml_escape(feature_name);
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
  out += "<title>Bland-Altman: " + name + "</title>\n";
  out += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
  out += "<g id=\"plot\" data-window=\"" + detail::format_full(xr.lo) + " " + detail::format_full(xr.hi) + " " +
         detail::format_full(yr.lo) + " " + detail::format_full(yr.hi) + "\">\n";
  out += "<rect x=\"" + px(kLeft) + "\" y=\"" + px(kTop) + "\" width=\"" + px(plot_w) + "\" height=\"" + px(plot_h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  // Ticks: five per axis, drawn as one path so the only <line> elements are
  // the three reference rules.
  std::string ticks;
  std::string labels;
  for (int i = 0; i <= 4; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    ticks += "M" + px(sx(xv)) + " " + px(kTop + plot_h) + "v5";
    ticks += "M" + px(kLeft) + " " + px(sy(yv)) + "h-5";
    labels += "<text x=\"" + px(sx(xv)) + "\" y=\"" + px(kTop + plot_h + 20) +
              "\" text-anchor=\"middle\" font-size=\"11\">" + tick_label(xv) + "</text>\n";
    labels += "<text x=\"" + px(kLeft - 8) + "\" y=\"" + px(sy(yv) + 4) + "\" text-anchor=\"end\" font-size=\"11\">" +
              tick_label(yv) + "</text>\n";
  }
  out += "<path d=\"" + ticks + "\" stroke=\"black\" fill=\"none\"/>\n";
  out += labels;

  auto rule = [&](double y, const char* cls, bool dashed) {
    out += "<line class=\"" + std::string(cls) + "\" x1=\"" + px(kLeft) + "\" y1=\"" + px(sy(y)) + "\" x2=\"" +
           px(kLeft + plot_w) + "\" y2=\"" + px(sy(y)) + "\" stroke=\"black\"" +
           (dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
  };
  rule(0.0, "zero", false);
  rule(result.loa_low, "loa-low", true);
  rule(result.loa_high, "loa-high", true);

  for (const auto& p : result.points) {
    out += "<circle cx=\"" + px(sx(p.mean)) + "\" cy=\"" + px(sy(p.difference)) +
           "\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.7\"/>\n";
  }
  out += "</g>\n";
  out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + name + "</text>\n";
  out += "<text x=\"" + px(kLeft + plot_w / 2) + "\" y=\"" + px(kHeight - 15) +
         "\" text-anchor=\"middle\" font-size=\"12\">Mean of test and reference" + xml_escape(units) + "</text>\n";
  out += "<text transform=\"translate(18 " + px(kTop + plot_h / 2) +
         ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">Difference, test - reference" + xml_escape(units) +
         "</text>\n";
  out += "</svg>\n";
  return out;
}

fs::path emit_table(const StratifiedTable& table, TableFormat format, const fs::path& dir) {
  const fs::path path = dir / (table.name + "_table" + (format == TableFormat::Csv ? ".csv" : ".md"));
  write_text_file(path, format_table(table, format));
  return path;
}

fs::path emit_bland_altman_svg(const BlandAltmanResult& result, Feature feature, const fs::path& dir) {
  const fs::path path = dir / ("bland_altman_" + std::string(feature_name(feature)) + ".svg");
  write_text_file(path, render_bland_altman_svg(result, feature_name(feature), feature_unit(feature)));
  return path;
}

void write_report(const ValidityReport& report, const fs::path& dir, const std::string& generated_at) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::UnwritableOutput, "cannot create '" + dir.string() + "'");
  for (const StratifiedTable* t : {&report.quality, &report.severity}) {
    emit_table(*t, TableFormat::Csv, dir);
    emit_table(*t, TableFormat::Markdown, dir);
  }
  for (const auto& e : report.bland_altman) {
    if (e.result) emit_bland_altman_svg(*e.result, e.feature, dir);
  }
  write_text_file(dir / "exclusions.csv", format_exclusions_csv(report.exclusions));
  write_text_file(dir / "report.json", format_report_json(report, generated_at));
}

}  // namespace pausebench
