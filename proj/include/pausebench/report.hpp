#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pausebench/audio.hpp"
#include "pausebench/features.hpp"
#include "pausebench/segmentation.hpp"
#include "pausebench/stats.hpp"

namespace pausebench {

/// One manifest row. Paths are resolved against the manifest directory.
struct RecordingRecord {
  std::string recording_id;
  std::string speaker_id;
  Group group = Group::HC;
  std::optional<double> wpm;
  std::filesystem::path wav_path;
  std::filesystem::path ref_alignment_path;
  std::filesystem::path test_alignment_path;
};

/// Header: recording_id,speaker_id,group,wpm,wav_path,ref_alignment_path,test_alignment_path
std::vector<RecordingRecord> parse_manifest(std::string_view text, const std::filesystem::path& base_dir);
std::vector<RecordingRecord> read_manifest(const std::filesystem::path& path);

/// Loads an SPA event CSV as-is, or parses a canonical JSON / TextGrid
/// alignment and segments it. The format is picked from the extension, then
/// from the content.
EventSequence load_event_sequence(const std::filesystem::path& path, const SegmentOptions& segment,
                                  const std::optional<std::string>& tier = std::nullopt,
                                  const std::string& recording_id = {});

struct ValidationConfig {
  SegmentOptions segment;
  FeatureOptions features;
  SpearmanOptions spearman;
  SnrOptions snr;
  std::optional<std::string> tier;
  /// Severity tables and Bland-Altman use only Good-quality recordings unless set.
  bool all_quality = false;
  unsigned jobs = 1;
  std::vector<Feature> bland_altman_features = {Feature::PauseDuration, Feature::SpeechDuration,
                                                Feature::TotalDuration};
};

/// Everything computed for one usable recording.
struct RecordSummary {
  RecordingRecord record;
  FeatureVector reference;
  FeatureVector test;
  SnrEstimate snr;
  QualityLabel quality = QualityLabel::Good;
  SeverityLabel severity = SeverityLabel::HC;
};

struct Exclusion {
  std::string recording_id;
  std::string reason;
};

struct ProcessedRecords {
  std::vector<RecordSummary> used;
  std::vector<Exclusion> excluded;
};

/// Per-record stage: parse both sources, segment, extract features, estimate
/// SNR against the reference events, assign strata. Failures become
/// exclusions; manifest order is preserved whatever the job count.
ProcessedRecords process_records(const std::vector<RecordingRecord>& manifest, const ValidationConfig& config);

struct CorrelationCell {
  std::size_t n = 0;
  std::optional<CorrelationResult> result;
  /// Why the cell is empty, e.g. "TooFewPairs".
  std::string reason;
};

struct StratifiedTable {
  std::string name;  // "quality" or "severity"
  std::string subset;  // records the table was computed on, e.g. "all" or "Good"
  std::vector<std::string> strata;
  std::vector<std::size_t> stratum_sizes;
  /// cells[stratum][feature index]
  std::vector<std::array<CorrelationCell, kFeatureCount>> cells;
};

struct BlandAltmanEntry {
  Feature feature = Feature::PauseDuration;
  std::size_t n = 0;
  std::optional<BlandAltmanResult> result;
  std::string reason;
};

struct ValidityReport {
  StratifiedTable quality;
  StratifiedTable severity;
  std::string bland_altman_subset;
  std::vector<BlandAltmanEntry> bland_altman;
  std::vector<RecordSummary> records;
  std::vector<Exclusion> exclusions;
  std::size_t records_in = 0;
  /// Speaker ids that occur on more than one used recording.
  std::vector<std::string> repeated_speakers;
  double pause_threshold = kDefaultPauseThreshold;
  double min_speech = 0.0;
  PValueMethod pvalue_method = PValueMethod::Auto;
  SdConvention sd_convention = SdConvention::Sample;
};

/// Aggregation over already-processed records. Throws AllRecordsExcluded when
/// `processed.used` is empty.
ValidityReport build_report(ProcessedRecords processed, const ValidationConfig& config);

/// process_records + build_report. Throws EmptyManifest / AllRecordsExcluded.
ValidityReport run_validation(const std::vector<RecordingRecord>& manifest, const ValidationConfig& config);

/// "<.001" below 0.001, otherwise two decimals.
std::string format_p_value(double p);
std::string format_rho(double rho);

enum class TableFormat { Csv, Markdown };

std::string format_table(const StratifiedTable& table, TableFormat format);
std::string format_exclusions_csv(const std::vector<Exclusion>& exclusions);
/// Machine report. `generated_at` is recorded verbatim in the metadata.
std::string format_report_json(const ValidityReport& report, const std::string& generated_at);

/// Scatter of (mean, difference) with dashed limits of agreement and a solid
/// zero line. Throws TooFewPairs below 2 points.
std::string render_bland_altman_svg(const BlandAltmanResult& result, std::string_view feature_name,
                                    std::string_view unit = "");

/// Writes <dir>/<name>_table.{csv|md}.
std::filesystem::path emit_table(const StratifiedTable& table, TableFormat format, const std::filesystem::path& dir);
std::filesystem::path emit_bland_altman_svg(const BlandAltmanResult& result, Feature feature,
                                            const std::filesystem::path& dir);

/// Writes every output file of a validation run into `dir`.
void write_report(const ValidityReport& report, const std::filesystem::path& dir, const std::string& generated_at);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace pausebench
