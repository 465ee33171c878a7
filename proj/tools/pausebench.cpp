// pausebench: speech/pause timing features and concurrent-validity reports
// from forced-alignment output.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pausebench/audio.hpp"
#include "pausebench/error.hpp"
#include "pausebench/features.hpp"
#include "pausebench/report.hpp"
#include "pausebench/segmentation.hpp"
#include "pausebench/synth.hpp"
#include "pausebench/version.hpp"

namespace fs = std::filesystem;
using namespace pausebench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitAllExcluded = 2;

// shortest text that reads back to the same double
std::string full(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct SegmentArgs {
  double threshold = kDefaultPauseThreshold;
  double min_speech = 0.0;
  std::string tier;

  void add_to(CLI::App* app) {
    app->add_option("--threshold", threshold, "Minimum pause length in seconds")->capture_default_str();
    app->add_option("--min-speech", min_speech, "Merge speech events shorter than this (seconds)")
        ->capture_default_str();
    app->add_option("--tier", tier, "TextGrid tier to read (default: 'words', else the first interval tier)");
  }
  SegmentOptions options() const { return {threshold, min_speech}; }
  std::optional<std::string> tier_name() const {
    return tier.empty() ? std::nullopt : std::optional<std::string>(tier);
  }
};

SnrSpan parse_span(const std::string& s) { return s == "passage" ? SnrSpan::Passage : SnrSpan::Full; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speech/pause timing features and concurrent-validity analysis"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // snr
  auto* snr_cmd = app.add_subcommand("snr", "Estimate SNR and audio quality of a WAV file");
  std::string snr_wav, snr_alignment, snr_span = "full";
  SegmentArgs snr_seg;
  snr_cmd->add_option("wav", snr_wav, "RIFF/WAVE file")->required()->check(CLI::ExistingFile);
  snr_cmd->add_option("--alignment", snr_alignment, "Alignment or event file marking speech and pauses")
      ->check(CLI::ExistingFile);
  snr_cmd->add_option("--span", snr_span, "Analyse the full recording or the passage span")
      ->check(CLI::IsMember({"full", "passage"}))
      ->capture_default_str();
  snr_seg.add_to(snr_cmd);

  // segment
  auto* seg_cmd = app.add_subcommand("segment", "Convert an alignment into speech/pause events");
  std::string seg_file;
  SegmentArgs seg_args;
  seg_cmd->add_option("alignment", seg_file, "TextGrid, canonical JSON or event CSV")
      ->required()
      ->check(CLI::ExistingFile);
  seg_args.add_to(seg_cmd);

  // features
  auto* feat_cmd = app.add_subcommand("features", "Compute the eight timing features of one recording");
  std::string feat_file, feat_sd = "sample";
  SegmentArgs feat_args;
  feat_cmd->add_option("file", feat_file, "Event CSV or alignment file")->required()->check(CLI::ExistingFile);
  feat_cmd->add_option("--sd", feat_sd, "Standard deviation convention for the CVs")
      ->check(CLI::IsMember({"sample", "population"}))
      ->capture_default_str();
  feat_args.add_to(feat_cmd);

  // validate
  auto* val_cmd = app.add_subcommand("validate", "Run the stratified validity analysis over a manifest");
  std::string val_manifest, val_out, val_pvalue = "auto", val_span = "full", val_sd = "sample";
  std::vector<std::string> val_ba;
  bool val_all_quality = false;
  unsigned val_jobs = 1;
  SegmentArgs val_seg;
  val_cmd->add_option("--manifest", val_manifest, "Manifest CSV")->required()->check(CLI::ExistingFile);
  val_cmd->add_option("--out", val_out, "Output directory")->required();
  val_cmd->add_option("--pvalue", val_pvalue, "p-value method")
      ->check(CLI::IsMember({"auto", "exact", "t"}))
      ->capture_default_str();
  val_cmd->add_flag("--all-quality", val_all_quality, "Use every quality level for severity and Bland-Altman");
  val_cmd->add_option("--jobs", val_jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  val_cmd->add_option("--span", val_span, "SNR analysis span")
      ->check(CLI::IsMember({"full", "passage"}))
      ->capture_default_str();
  val_cmd->add_option("--sd", val_sd, "Standard deviation convention for the CVs")
      ->check(CLI::IsMember({"sample", "population"}))
      ->capture_default_str();
  val_cmd->add_option("--bland-altman", val_ba, "Features plotted (default: pause, speech and total duration)")
      ->delimiter(',');
  val_seg.add_to(val_cmd);

  // synth
  auto* syn_cmd = app.add_subcommand("synth", "Generate a synthetic corpus with known ground truth");
  std::string syn_out, syn_profile;
  std::size_t syn_n = 200;
  unsigned syn_jobs = 1;
  syn_cmd->add_option("--out", syn_out, "Output directory")->required();
  syn_cmd->add_option("--n", syn_n, "Number of recordings")->capture_default_str();
  syn_cmd->add_option("--profile", syn_profile, "Profile JSON")->check(CLI::ExistingFile);
  syn_cmd->add_option("--jobs", syn_jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*snr_cmd) {
      const AudioBuffer audio = read_wav_file(snr_wav);
      SnrOptions opts;
      opts.span = parse_span(snr_span);
      std::optional<EventSequence> events;
      if (!snr_alignment.empty()) {
        events = load_event_sequence(snr_alignment, snr_seg.options(), snr_seg.tier_name());
      }
      const SnrEstimate est = estimate_snr(audio, events ? &*events : nullptr, opts);
      if (est.zero_noise_floor) std::cerr << "warning: noise region is digital silence; reporting Good\n";
      std::cout << "snr_db,quality\n"
                << (std::isfinite(est.snr_db) ? full(est.snr_db) : (est.snr_db > 0 ? "inf" : "-inf")) << ","
                << to_string(classify_quality(est)) << "\n";
    } else if (*seg_cmd) {
      const EventSequence seq = load_event_sequence(seg_file, seg_args.options(), seg_args.tier_name());
      std::cout << format_event_csv(seq);
    } else if (*feat_cmd) {
      const EventSequence seq = load_event_sequence(feat_file, feat_args.options(), feat_args.tier_name());
      FeatureOptions opts;
      opts.sd = feat_sd == "population" ? SdConvention::Population : SdConvention::Sample;
      const FeatureVector fv = extract_features(seq, opts);
      std::string header, row;
      for (Feature f : kAllFeatures) {
        if (!header.empty()) {
          header += ",";
          row += ",";
        }
        header += feature_name(f);
        if (const auto v = fv.get(f)) row += f == Feature::PauseEvents ? std::to_string(fv.pause_events) : full(*v);
      }
      std::cout << header << "\n" << row << "\n";
    } else if (*val_cmd) {
      ValidationConfig config;
      config.segment = val_seg.options();
      config.tier = val_seg.tier_name();
      config.spearman.method = *parse_pvalue_method(val_pvalue);
      config.snr.span = parse_span(val_span);
      config.features.sd = val_sd == "population" ? SdConvention::Population : SdConvention::Sample;
      config.all_quality = val_all_quality;
      config.jobs = val_jobs;
      if (!val_ba.empty()) {
        config.bland_altman_features.clear();
        for (const auto& name : val_ba) {
          const auto f = parse_feature(name);
          if (!f) throw Error(ErrorCode::InvalidArgument, "unknown feature '" + name + "'");
          config.bland_altman_features.push_back(*f);
        }
      }
      const auto manifest = read_manifest(val_manifest);
      ProcessedRecords processed = process_records(manifest, config);
      const std::size_t used = processed.used.size();
      const std::size_t excluded = processed.excluded.size();
      if (used == 0) {
        std::error_code ec;
        fs::create_directories(val_out, ec);
        write_text_file(fs::path(val_out) / "exclusions.csv", format_exclusions_csv(processed.excluded));
        std::cerr << "error: all " << excluded << " records were excluded (see exclusions.csv)\n";
        return kExitAllExcluded;
      }
      const ValidityReport report = build_report(std::move(processed), config);
      write_report(report, val_out, utc_timestamp());
      std::cerr << "records in: " << report.records_in << ", used: " << used << ", excluded: " << excluded << "\n";
      if (!report.repeated_speakers.empty()) {
        std::cerr << "note: " << report.repeated_speakers.size()
                  << " speaker(s) contribute more than one recording\n";
      }
    } else if (*syn_cmd) {
      CorpusProfile profile = syn_profile.empty() ? CorpusProfile{} : parse_corpus_profile(read_text_file(syn_profile));
      if (syn_cmd->count("--n") > 0 || syn_profile.empty()) profile.count = syn_n;
      const fs::path manifest = write_corpus(profile, syn_out, syn_jobs);
      std::cerr << "wrote " << profile.count << " recordings; manifest: " << manifest.string() << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::AllRecordsExcluded ? kExitAllExcluded : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
