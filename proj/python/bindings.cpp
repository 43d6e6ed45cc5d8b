#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "camtamper/detectors.hpp"
#include "camtamper/errors.hpp"
#include "camtamper/eval.hpp"
#include "camtamper/frame_io.hpp"
#include "camtamper/imgproc.hpp"
#include "camtamper/selftest.hpp"
#include "camtamper/synth.hpp"

namespace py = pybind11;
using namespace camtamper;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

Frame frame_from_array(const U8Array& a, std::int64_t index) {
  if (a.ndim() != 2) throw DomainError("frame array must be 2-D (height, width)");
  const auto h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
  std::vector<std::uint8_t> luma(a.data(), a.data() + a.size());
  return Frame(w, h, std::move(luma), index);
}

U8Array frame_to_array(const Frame& f) {
  U8Array out({f.height(), f.width()});
  std::memcpy(out.mutable_data(), f.luma().data(), f.size());
  return out;
}

py::array_t<double> grid_to_array(const RealGrid& g) {
  py::array_t<double> out({g.height, g.width});
  std::memcpy(out.mutable_data(), g.data.data(), g.data.size() * sizeof(double));
  return out;
}

py::dict config_to_dict(const DetectorConfig& c) {
  py::dict d;
  for (const auto& name : DetectorConfig::field_names()) d[py::str(name)] = c.get(name);
  return d;
}

DetectorConfig config_from(const py::object& obj) {
  if (obj.is_none()) return {};
  if (py::isinstance<DetectorConfig>(obj)) return obj.cast<DetectorConfig>();
  DetectorConfig c;
  for (auto [k, v] : obj.cast<py::dict>()) c.set_value(k.cast<std::string>(), v.cast<double>());
  return c;
}

std::vector<Frame> frames_from(const py::iterable& items) {
  std::vector<Frame> frames;
  std::int64_t i = 0;
  for (auto item : items) {
    if (py::isinstance<Frame>(item)) frames.push_back(item.cast<Frame>());
    else frames.push_back(frame_from_array(item.cast<U8Array>(), i));
    ++i;
  }
  return frames;
}

py::dict rates_to_dict(const eval::RateReport& r) {
  py::dict d, per_kind;
  d["TP"] = r.true_positives;
  d["FP"] = r.false_positives;
  d["FN"] = r.false_negatives;
  d["TDR"] = r.true_detection_rate;
  d["FDR"] = r.false_detection_rate;
  d["mean_latency"] = r.mean_latency ? py::cast(*r.mean_latency) : py::none();
  for (const auto& [kind, rates] : r.per_kind) {
    py::dict k;
    k["TDR"] = rates.true_detection_rate;
    k["FDR"] = rates.false_detection_rate;
    per_kind[py::str(std::string(to_string(kind)))] = k;
  }
  d["per_kind"] = per_kind;
  return d;
}

}  // namespace

PYBIND11_MODULE(_camtamper, m) {
  m.doc() = "Camera tampering detection";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<UnsupportedError>(m, "UnsupportedError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<StateError>(m, "StateError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());

  py::class_<Frame>(m, "Frame")
      .def(py::init([](const U8Array& a, std::int64_t index) { return frame_from_array(a, index); }),
           py::arg("pixels"), py::arg("index") = 0)
      .def_property_readonly("width", &Frame::width)
      .def_property_readonly("height", &Frame::height)
      .def_property_readonly("index", &Frame::index)
      .def("to_numpy", &frame_to_array)
      .def("__eq__", [](const Frame& a, const Frame& b) { return a == b; })
      .def("__repr__", [](const Frame& f) {
        return "<Frame " + std::to_string(f.width()) + "x" + std::to_string(f.height()) + " #" +
               std::to_string(f.index()) + ">";
      });

  m.def("load_pgm", &load_pgm, py::arg("path"));
  m.def("save_pgm", &save_pgm, py::arg("path"), py::arg("frame"));
  m.def("read_frames", [](const std::filesystem::path& p) {
    auto stream = open_stream(p);
    return read_all(*stream);
  }, py::arg("path"), "Reads every frame of a PGM directory or Y4M file.");

  m.def("histogram", [](const Frame& f) {
    const auto h = imgproc::histogram(f);
    return std::vector<std::uint64_t>(h.bins.begin(), h.bins.end());
  });
  m.def("entropy", [](const Frame& f) { return imgproc::entropy(imgproc::histogram(f)); });
  m.def("dct2", [](const Frame& f) { return grid_to_array(imgproc::dct2(f)); });
  m.def("edge_count", [](const Frame& f) { return imgproc::edge_map(f).count(); });

  py::enum_<TamperKind>(m, "TamperKind")
      .value("Occlusion", TamperKind::Occlusion)
      .value("Defocus", TamperKind::Defocus)
      .value("Motion", TamperKind::Motion)
      .value("Generic", TamperKind::Generic);

  py::class_<TamperEvent>(m, "TamperEvent")
      .def(py::init([](TamperKind kind, std::int64_t frame, double score, std::string id) {
             return TamperEvent{kind, frame, score, std::move(id)};
           }),
           py::arg("kind"), py::arg("frame_index"), py::arg("score") = 0.0, py::arg("detector_id") = "")
      .def_readonly("kind", &TamperEvent::kind)
      .def_readonly("frame_index", &TamperEvent::frame_index)
      .def_readonly("score", &TamperEvent::score)
      .def_readonly("detector_id", &TamperEvent::detector_id)
      .def("__eq__", [](const TamperEvent& a, const TamperEvent& b) { return a == b; })
      .def("__repr__", [](const TamperEvent& e) { return eval::event_to_json_line(e); });

  py::class_<DetectorConfig>(m, "DetectorConfig")
      .def(py::init([](const py::kwargs& kw) { return config_from(kw); }))
      .def("__getitem__", &DetectorConfig::get)
      .def("__setitem__", &DetectorConfig::set_value)
      .def("validate", &DetectorConfig::validate)
      .def("to_dict", &config_to_dict)
      .def("to_json", &DetectorConfig::to_json)
      .def_static("from_json", &DetectorConfig::from_json)
      .def_static("field_names", &DetectorConfig::field_names);

  py::class_<Detector>(m, "Detector")
      .def_property_readonly("id", [](const Detector& d) { return std::string(d.id()); })
      .def("step", &Detector::step, py::arg("frame"));

  m.def("detector_ids", &detector_ids);
  m.def("make_detector", [](const std::string& id, const py::object& cfg) {
    return make_detector(id, config_from(cfg));
  }, py::arg("id"), py::arg("config") = py::none());
  m.def("run_detector", [](const std::string& id, const py::iterable& frames, const py::object& cfg) {
    const auto fs = frames_from(frames);
    const auto c = config_from(cfg);
    py::gil_scoped_release release;
    return run_detector(id, c, fs);
  }, py::arg("id"), py::arg("frames"), py::arg("config") = py::none());

  py::class_<synth::LabeledInterval>(m, "LabeledInterval")
      .def(py::init([](TamperKind k, std::int64_t s, std::int64_t e) { return synth::LabeledInterval{k, s, e}; }),
           py::arg("kind"), py::arg("start"), py::arg("end"))
      .def_readonly("kind", &synth::LabeledInterval::kind)
      .def_readonly("start", &synth::LabeledInterval::start)
      .def_readonly("end", &synth::LabeledInterval::end);

  py::class_<synth::RenderedClip>(m, "Clip")
      .def_readonly("name", &synth::RenderedClip::name)
      .def_readonly("frames", &synth::RenderedClip::frames)
      .def_property_readonly("intervals", [](const synth::RenderedClip& c) { return c.truth.intervals; })
      .def_property_readonly("truth_json", [](const synth::RenderedClip& c) { return c.truth.to_json(); });

  m.def("render_scenario", [](const std::string& json) { return synth::render(synth::parse_scenario(json)); },
        py::arg("scenario_json"));
  m.def("standard_corpus", [](std::uint64_t seed) {
    std::vector<synth::RenderedClip> clips;
    for (const auto& sc : synth::standard_corpus(seed)) clips.push_back(synth::render(sc));
    return clips;
  }, py::arg("seed") = 2024);

  m.def("match_events", [](const std::vector<TamperEvent>& events, const std::vector<synth::LabeledInterval>& truth,
                           std::int64_t window) {
    const auto r = eval::match_events(events, truth, window);
    py::dict d;
    d["TP"] = r.true_positives;
    d["FP"] = r.false_positives;
    d["FN"] = r.false_negatives;
    d["latencies"] = r.latencies;
    return d;
  }, py::arg("events"), py::arg("truth"), py::arg("window") = eval::kDefaultMatchWindow);
  m.def("evaluate", [](const std::string& id, const std::vector<synth::RenderedClip>& corpus, const py::object& cfg,
                       std::int64_t window) {
    const auto c = config_from(cfg);
    eval::CorpusEvaluation result;
    {
      py::gil_scoped_release release;
      result = eval::evaluate(id, c, corpus, window);
    }
    return rates_to_dict(result.total);
  }, py::arg("id"), py::arg("corpus"), py::arg("config") = py::none(),
     py::arg("window") = eval::kDefaultMatchWindow);

  m.def("selftest", [](bool bench) {
    SelftestOptions opts;
    opts.bench = bench;
    py::dict out;
    for (const auto& r : run_selftest(opts)) out[py::str(r.name)] = r.passed;
    return out;
  }, py::arg("bench") = false);
}
