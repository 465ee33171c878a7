#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pausebench/alignment.hpp"
#include "pausebench/audio.hpp"
#include "pausebench/error.hpp"
#include "pausebench/events.hpp"
#include "pausebench/features.hpp"
#include "pausebench/report.hpp"
#include "pausebench/segmentation.hpp"
#include "pausebench/stats.hpp"
#include "pausebench/synth.hpp"
#include "pausebench/version.hpp"

namespace py = pybind11;
using namespace pausebench;

namespace {

py::dict features_dict(const FeatureVector& f) {
  py::dict d;
  for (Feature k : kAllFeatures) {
    const auto v = f.get(k);
    if (k == Feature::PauseEvents) {
      d[py::str(std::string(feature_name(k)))] = f.pause_events;
    } else if (v) {
      d[py::str(std::string(feature_name(k)))] = *v;
    } else {
      d[py::str(std::string(feature_name(k)))] = py::none();
    }
  }
  return d;
}

std::vector<std::optional<double>> as_optional(const std::vector<std::optional<double>>& v) { return v; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Speech/pause timing features and concurrent-validity analysis";
  m.attr("__version__") = std::string(kVersion);

  static py::exception<Error> error(m, "PausebenchError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error)(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::enum_<EventKind>(m, "EventKind").value("Speech", EventKind::Speech).value("Pause", EventKind::Pause);

  py::class_<Event>(m, "Event")
      .def(py::init([](EventKind k, double s, double e) { return Event{k, s, e}; }), py::arg("kind"),
           py::arg("start"), py::arg("end"))
      .def_readwrite("kind", &Event::kind)
      .def_readwrite("start", &Event::start)
      .def_readwrite("end", &Event::end)
      .def_property_readonly("duration", &Event::duration)
      .def("__eq__", [](const Event& a, const Event& b) { return a == b; })
      .def("__repr__", [](const Event& e) {
        return "Event(" + std::string(to_string(e.kind)) + ", " + std::to_string(e.start) + ", " +
               std::to_string(e.end) + ")";
      });

  py::class_<EventSequence>(m, "EventSequence")
      .def(py::init<>())
      .def_readwrite("recording_id", &EventSequence::recording_id)
      .def_readwrite("events", &EventSequence::events)
      .def_readwrite("pause_threshold", &EventSequence::pause_threshold)
      .def("is_boundary_pause", &EventSequence::is_boundary_pause)
      .def("validate", &EventSequence::validate)
      .def("__len__", [](const EventSequence& s) { return s.events.size(); })
      .def("__eq__", [](const EventSequence& a, const EventSequence& b) { return a == b; });

  py::class_<AlignmentTrack>(m, "AlignmentTrack")
      .def(py::init<>())
      .def_readwrite("recording_id", &AlignmentTrack::recording_id)
      .def_readwrite("tier_name", &AlignmentTrack::tier_name)
      .def_property(
          "source", [](const AlignmentTrack& t) { return std::string(to_string(t.source)); },
          [](AlignmentTrack& t, const std::string& s) { t.source = parse_alignment_source(s); })
      .def_property(
          "intervals",
          [](const AlignmentTrack& t) {
            std::vector<std::tuple<double, double, std::string>> out;
            for (const auto& iv : t.intervals) out.emplace_back(iv.start, iv.end, iv.label);
            return out;
          },
          [](AlignmentTrack& t, const std::vector<std::tuple<double, double, std::string>>& ivs) {
            t.intervals.clear();
            for (const auto& [s, e, l] : ivs) t.intervals.push_back({s, e, l});
          })
      .def("__eq__", [](const AlignmentTrack& a, const AlignmentTrack& b) { return a == b; });

  m.def("is_silence_label", &is_silence_label);
  m.def(
      "parse_textgrid",
      [](py::bytes data, std::optional<std::string> tier, std::string recording_id) {
        TextGridOptions o;
        o.tier = std::move(tier);
        o.recording_id = std::move(recording_id);
        return parse_textgrid(std::string(data), o);
      },
      py::arg("data"), py::arg("tier") = py::none(), py::arg("recording_id") = "");
  m.def("serialize_textgrid", &serialize_textgrid);
  m.def("parse_alignment_json", [](const std::string& text) { return parse_alignment_json(text); });
  m.def("serialize_alignment_json", &serialize_alignment_json);
  m.def(
      "parse_spa_export", [](const std::string& text, std::string id) { return parse_spa_export(text, id); },
      py::arg("text"), py::arg("recording_id") = "");
  m.def("format_event_csv", &format_event_csv);

  m.def(
      "segment",
      [](const AlignmentTrack& t, double threshold, double min_speech) {
        return segment(t, {threshold, min_speech});
      },
      py::arg("track"), py::arg("pause_threshold") = kDefaultPauseThreshold, py::arg("min_speech") = 0.0);
  m.def("phrases", &phrases);
  m.def("internal_pauses", &internal_pauses);

  m.def(
      "extract_features",
      [](const EventSequence& s, const std::string& sd) {
        FeatureOptions o;
        if (sd == "population") o.sd = SdConvention::Population;
        else if (sd != "sample") throw Error(ErrorCode::InvalidArgument, "sd must be 'sample' or 'population'");
        return features_dict(extract_features(s, o));
      },
      py::arg("sequence"), py::arg("sd") = "sample");
  m.def("speaking_rate", &speaking_rate);
  m.attr("FEATURES") = [] {
    std::vector<std::string> names;
    for (Feature f : kAllFeatures) names.emplace_back(feature_name(f));
    return names;
  }();

  m.def(
      "spearman",
      [](const std::vector<std::optional<double>>& x, const std::vector<std::optional<double>>& y,
         const std::string& method) {
        const auto mth = parse_pvalue_method(method);
        if (!mth) throw Error(ErrorCode::InvalidArgument, "method must be auto, exact or t");
        const auto a = as_optional(x), b = as_optional(y);
        const CorrelationResult r = spearman(std::span<const std::optional<double>>(a),
                                             std::span<const std::optional<double>>(b), {.method = *mth});
        py::dict d;
        d["rho"] = r.rho;
        d["p_value"] = r.p_value;
        d["n"] = r.n;
        d["significant"] = r.significant;
        return d;
      },
      py::arg("x"), py::arg("y"), py::arg("method") = "auto");
  m.def("bland_altman", [](const std::vector<std::optional<double>>& a, const std::vector<std::optional<double>>& b) {
    const BlandAltmanResult r =
        bland_altman(std::span<const std::optional<double>>(a), std::span<const std::optional<double>>(b));
    py::dict d;
    d["bias"] = r.bias;
    d["sd"] = r.sd;
    d["loa_low"] = r.loa_low;
    d["loa_high"] = r.loa_high;
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : r.points) pts.emplace_back(p.mean, p.difference);
    d["points"] = pts;
    return d;
  });
  m.def(
      "classify_severity",
      [](const std::string& group, std::optional<double> wpm) {
        const auto g = parse_group(group);
        if (!g) throw Error(ErrorCode::InvalidArgument, "group must be HC or ALS");
        return std::string(to_string(classify_severity(*g, wpm)));
      },
      py::arg("group"), py::arg("wpm") = py::none());

  py::class_<AudioBuffer>(m, "AudioBuffer")
      .def(py::init<>())
      .def_readwrite("samples", &AudioBuffer::samples)
      .def_readwrite("sample_rate", &AudioBuffer::sample_rate)
      .def_property_readonly("duration", &AudioBuffer::duration)
      .def("__len__", &AudioBuffer::size);
  m.def("decode_wav", [](py::bytes data) { return decode_wav(std::string_view(std::string(data))); });
  m.def("read_wav", &read_wav_file);
  m.def("encode_wav", [](const AudioBuffer& a) {
    const auto bytes = encode_wav(a);
    return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  });
  m.def(
      "frame_energies",
      [](const AudioBuffer& a, double frame_ms, double hop_ms) { return frame_energies(a, {frame_ms, hop_ms}); },
      py::arg("audio"), py::arg("frame_ms") = 25.0, py::arg("hop_ms") = 10.0);
  m.def(
      "estimate_snr",
      [](const AudioBuffer& a, std::optional<EventSequence> alignment, const std::string& span) {
        SnrOptions o;
        o.span = span == "passage" ? SnrSpan::Passage : SnrSpan::Full;
        const SnrEstimate e = estimate_snr(a, alignment ? &*alignment : nullptr, o);
        py::dict d;
        d["snr_db"] = e.snr_db;
        d["method"] = e.method == SnrMethod::Alignment ? "alignment" : "percentile";
        d["zero_noise_floor"] = e.zero_noise_floor;
        d["quality"] = std::string(to_string(classify_quality(e)));
        return d;
      },
      py::arg("audio"), py::arg("alignment") = py::none(), py::arg("span") = "full");
  m.def("classify_quality", [](double snr) { return std::string(to_string(classify_quality(snr))); });

  m.def(
      "generate_sequence",
      [](std::size_t n_phrases, std::uint64_t seed, bool boundary_pauses) {
        SynthProfile p;
        p.n_phrases = n_phrases;
        p.seed = seed;
        p.boundary_pauses = boundary_pauses;
        const auto s = generate_sequence(p);
        return py::make_tuple(s.sequence, features_dict(s.truth));
      },
      py::arg("n_phrases") = 8, py::arg("seed") = 42, py::arg("boundary_pauses") = true);
  m.def("perturb_alignment", &perturb_alignment, py::arg("sequence"), py::arg("jitter_sd"), py::arg("seed"));
  m.def("render_audio", &render_audio, py::arg("sequence"), py::arg("target_snr_db"),
        py::arg("sample_rate") = 16000, py::arg("seed") = 0);
  m.def(
      "write_corpus",
      [](const std::filesystem::path& out, std::size_t count, std::optional<std::string> profile_json,
         unsigned jobs) {
        CorpusProfile p = profile_json ? parse_corpus_profile(*profile_json) : CorpusProfile{};
        p.count = count;
        return write_corpus(p, out, jobs);
      },
      py::arg("out_dir"), py::arg("count") = 200, py::arg("profile_json") = py::none(), py::arg("jobs") = 1);

  m.def(
      "validate",
      [](const std::filesystem::path& manifest, const std::filesystem::path& out, const std::string& pvalue,
         bool all_quality, unsigned jobs) {
        ValidationConfig c;
        const auto mth = parse_pvalue_method(pvalue);
        if (!mth) throw Error(ErrorCode::InvalidArgument, "pvalue must be auto, exact or t");
        c.spearman.method = *mth;
        c.all_quality = all_quality;
        c.jobs = jobs;
        const ValidityReport r = run_validation(read_manifest(manifest), c);
        write_report(r, out, "python");
        py::dict d;
        d["records_in"] = r.records_in;
        d["used"] = r.records.size();
        d["excluded"] = r.exclusions.size();
        return d;
      },
      py::arg("manifest"), py::arg("out_dir"), py::arg("pvalue") = "auto", py::arg("all_quality") = false,
      py::arg("jobs") = 1);
}
