#include "camtamper/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "camtamper/detectors.hpp"
#include "camtamper/errors.hpp"
#include "camtamper/eval.hpp"
#include "camtamper/frame_io.hpp"
#include "camtamper/selftest.hpp"
#include "camtamper/synth.hpp"

namespace camtamper {

namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

void make_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

bool is_scenario_path(const fs::path& p) { return p.extension() == ".json"; }

struct Log {
  std::ostream& err;
  bool quiet = false;
  void info(const std::string& msg) const {
    if (!quiet) err << "camtamper: " << msg << '\n';
  }
  void error(const std::string& msg) const { err << "camtamper: error: " << msg << '\n'; }
};

// ---------------------------------------------------------------------------
// detect

struct DetectArgs {
  std::string input;
  std::string detectors = "combined";
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out;
  std::optional<std::uint64_t> seed;
};

DetectorConfig load_config(const DetectArgs& a) {
  DetectorConfig cfg;
  if (!a.config_path.empty()) cfg = DetectorConfig::from_json(read_text(a.config_path));
  for (const auto& kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--set expects name=value, got '" + kv + "'");
    }
    cfg.set(std::string_view(kv).substr(0, eq), std::string_view(kv).substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

std::vector<std::string> select_detectors(const std::string& list) {
  std::vector<std::string> ids = split_list(list);
  if (ids.empty()) throw ConfigError("no detectors selected");
  const auto& known = detector_ids();
  for (const auto& id : ids) {
    if (std::find(known.begin(), known.end(), id) == known.end()) {
      throw ConfigError("unknown detector '" + id + "'");
    }
  }
  std::vector<std::string> unique;
  for (const auto& id : ids) {
    if (std::find(unique.begin(), unique.end(), id) == unique.end()) unique.push_back(id);
  }
  return unique;
}

std::unique_ptr<FrameStream> open_input(const std::string& input,
                                        std::optional<std::uint64_t> seed) {
  const fs::path path(input);
  if (input != "-" && is_scenario_path(path)) {
    const synth::Scenario sc = synth::parse_scenario(read_text(path));
    return synth::generate_scenario(sc, seed.value_or(sc.seed)).stream;
  }
  return open_stream(path);
}

int cmd_detect(const DetectArgs& a, const Log& log) {
  const DetectorConfig cfg = load_config(a);
  const std::vector<std::string> ids = select_detectors(a.detectors);
  auto stream = open_input(a.input, a.seed);

  struct Slot {
    std::string id;
    std::unique_ptr<Detector> det;
    std::size_t events = 0;
    std::map<TamperKind, std::size_t> by_kind;
    std::string disabled_reason;
  };
  std::vector<Slot> slots;
  for (const auto& id : ids) slots.push_back({id, make_detector(id, cfg), 0, {}, {}});

  std::vector<TamperEvent> events;
  std::int64_t frames = 0;
  while (auto frame = stream->next()) {
    ++frames;
    for (Slot& s : slots) {
      if (!s.det) continue;
      try {
        if (auto e = s.det->step(*frame)) {
          ++s.events;
          ++s.by_kind[e->kind];
          events.push_back(std::move(*e));
        }
      } catch (const ConfigError& ex) {
        log.error(s.id + " disabled: " + ex.what());
        s.disabled_reason = ex.what();
        s.det.reset();
      }
    }
  }

  std::ostringstream summary;
  summary << "input: " << stream->source() << '\n';
  summary << "frames: " << frames << " (" << stream->width() << "x" << stream->height() << ")\n";
  summary << "events: " << events.size() << '\n';
  for (const Slot& s : slots) {
    summary << s.id << ": " << s.events << " event(s)";
    for (const auto& [kind, n] : s.by_kind) summary << ' ' << to_string(kind) << '=' << n;
    if (!s.disabled_reason.empty()) summary << " [disabled: " << s.disabled_reason << ']';
    summary << '\n';
  }

  const fs::path out_dir(a.out);
  make_out_dir(out_dir);
  write_text(out_dir / "events.jsonl", eval::events_to_jsonl(events));
  write_text(out_dir / "summary.txt", summary.str());
  log.info("processed " + std::to_string(frames) + " frames, " + std::to_string(events.size()) +
           " event(s) -> " + out_dir.string());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
};

void write_clip(const fs::path& dir, const std::vector<Frame>& frames,
                const synth::GroundTruth& truth) {
  make_out_dir(dir);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    save_pgm(dir / sequence_file_name(static_cast<std::int64_t>(i)), frames[i]);
  }
  write_text(dir / "ground_truth.json", truth.to_json());
}

int cmd_synth(const SynthArgs& a, const Log& log) {
  const synth::Scenario sc = synth::parse_scenario(read_text(a.scenario));
  auto gen = synth::generate_scenario(sc, a.seed.value_or(sc.seed));
  // Render fully before touching the output directory.
  const std::vector<Frame> frames = read_all(*gen.stream);
  write_clip(a.out, frames, gen.truth);
  log.info("wrote " + std::to_string(frames.size()) + " frames to " + a.out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// corpus

struct CorpusArgs {
  std::string out;
  std::uint64_t seed = 2024;
  bool stress = false;
};

int cmd_corpus(const CorpusArgs& a, const Log& log) {
  const auto scenarios = a.stress ? synth::stress_corpus(a.seed) : synth::standard_corpus(a.seed);
  std::vector<synth::RenderedClip> clips;
  for (const auto& sc : scenarios) clips.push_back(synth::render(sc));
  const fs::path root(a.out);
  for (std::size_t i = 0; i < clips.size(); ++i) {
    write_clip(root / clips[i].name, clips[i].frames, clips[i].truth);
    write_text(root / clips[i].name / "scenario.json", synth::scenario_to_json(scenarios[i]));
  }
  log.info("wrote " + std::to_string(clips.size()) + " clips to " + root.string());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string events;
  std::string truth;
  std::string out;
  std::string detectors;
  std::int64_t window = eval::kDefaultMatchWindow;
};

int cmd_eval(const EvalArgs& a, const Log& log) {
  if (a.window < 0) throw ConfigError("--window must be non-negative");
  const std::string events_text = read_text(a.events);
  const std::string truth_text = read_text(a.truth);
  const std::vector<TamperEvent> events = eval::events_from_jsonl(events_text);
  const synth::GroundTruth truth = synth::GroundTruth::from_json(truth_text);

  std::vector<std::string> ids = split_list(a.detectors);
  if (ids.empty()) {
    for (const auto& e : events) {
      if (std::find(ids.begin(), ids.end(), e.detector_id) == ids.end()) {
        ids.push_back(e.detector_id);
      }
    }
  }
  if (ids.empty()) ids.push_back("none");

  std::vector<eval::ClipResult> rows;
  for (const auto& id : ids) {
    std::vector<TamperEvent> mine;
    for (const auto& e : events) {
      if (e.detector_id == id) mine.push_back(e);
    }
    eval::ClipResult row;
    row.clip = truth.clip;
    row.detector = id;
    row.truth_kinds = eval::truth_kinds_label(truth.intervals);
    try {
      row.match = eval::match_events(mine, truth.intervals, a.window);
    } catch (const DomainError& ex) {
      throw ValidationError(a.events + ": detector " + id + ": " + ex.what());
    }
    rows.push_back(std::move(row));
  }

  const fs::path out_dir(a.out);
  make_out_dir(out_dir);
  write_text(out_dir / "report.csv", eval::report_csv(rows));
  write_text(out_dir / "report.json", eval::report_json(rows, a.window));
  log.info("evaluated " + std::to_string(rows.size()) + " detector(s) -> " + out_dir.string());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// selftest

struct SelftestArgs {
  bool bench = false;
  bool inject_fault = false;
  int bench_frames = 60;
};

int cmd_selftest(const SelftestArgs& a, std::ostream& out, const Log& log) {
  SelftestOptions opt;
  opt.bench = a.bench;
  opt.inject_fault = a.inject_fault;
  opt.bench_frames = a.bench_frames;
  const auto results = run_selftest(opt);
  print_checks(out, results, log.quiet ? nullptr : &log.err);
  const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  return ok ? kExitOk : kExitSelftestFailed;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const FormatError*>(&e) ||
      dynamic_cast<const UnsupportedError*>(&e) || dynamic_cast<const fs::filesystem_error*>(&e)) {
    return kExitIo;
  }
  return kExitConfig;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Camera tampering detection toolkit", "camtamper"};
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Only report errors");

  DetectArgs detect;
  auto* c_detect = app.add_subcommand("detect", "Run detectors over a frame source");
  c_detect->add_option("--input", detect.input, "PGM directory, Y4M file ('-' for stdin) or scenario JSON")
      ->required();
  c_detect->add_option("--detectors", detect.detectors, "Comma-separated detector ids")
      ->capture_default_str();
  c_detect->add_option("--config", detect.config_path, "DetectorConfig JSON file");
  c_detect->add_option("--set", detect.overrides, "Override a config field: name=value");
  c_detect->add_option("--out", detect.out, "Output directory")->required();
  c_detect->add_option("--seed", detect.seed, "Seed for scenario inputs");

  SynthArgs synth_args;
  auto* c_synth = app.add_subcommand("synth", "Render a scenario to PGM frames and ground truth");
  c_synth->add_option("--scenario", synth_args.scenario, "Scenario JSON")->required();
  c_synth->add_option("--out", synth_args.out, "Output directory")->required();
  c_synth->add_option("--seed", synth_args.seed, "Override the scenario seed");

  CorpusArgs corpus;
  auto* c_corpus = app.add_subcommand("corpus", "Write the built-in synthetic corpus");
  c_corpus->add_option("--out", corpus.out, "Output directory")->required();
  c_corpus->add_option("--seed", corpus.seed, "Corpus seed")->capture_default_str();
  c_corpus->add_flag("--stress", corpus.stress, "Include the single-frame glitch clips");

  EvalArgs eval_args;
  auto* c_eval = app.add_subcommand("eval", "Score detector events against ground truth");
  c_eval->add_option("--events", eval_args.events, "events.jsonl from detect")->required();
  c_eval->add_option("--truth", eval_args.truth, "ground_truth.json from synth")->required();
  c_eval->add_option("--out", eval_args.out, "Output directory")->required();
  c_eval->add_option("--detectors", eval_args.detectors, "Detectors to report (default: all in events)");
  c_eval->add_option("--window", eval_args.window, "Frames past interval end that still match")
      ->capture_default_str();

  SelftestArgs st;
  auto* c_selftest = app.add_subcommand("selftest", "Run the embedded oracle checks");
  c_selftest->add_flag("--bench", st.bench, "Also time the combined detector at 640x480");
  c_selftest->add_flag("--inject-fault", st.inject_fault, "Perturb the DCT normalization");
  c_selftest->add_option("--bench-frames", st.bench_frames, "Frames timed by --bench")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "camtamper: error: " << e.what() << '\n';
    return kExitConfig;
  }

  const Log log{err, quiet};
  try {
    if (*c_detect) return cmd_detect(detect, log);
    if (*c_synth) return cmd_synth(synth_args, log);
    if (*c_corpus) return cmd_corpus(corpus, log);
    if (*c_eval) return cmd_eval(eval_args, log);
    if (*c_selftest) return cmd_selftest(st, out, log);
  } catch (const std::exception& e) {
    log.error(e.what());
    return exit_code_for(e);
  }
  return kExitConfig;
}

}  // namespace camtamper
