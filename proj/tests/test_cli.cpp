#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <sys/wait.h>

#include "camtamper/cli.hpp"
#include "camtamper/eval.hpp"
#include "camtamper/frame_io.hpp"
#include "camtamper/synth.hpp"
#include "temp_dir.hpp"

using namespace camtamper;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) out.push_back(l);
  return out;
}

const std::string kScenarios = CAMTAMPER_SCENARIO_DIR;

}  // namespace

TEST_CASE("selftest prints check,status lines and honours the fault hook") {
  const Run ok = cli({"-q", "selftest"});
  CHECK(ok.code == 0);
  const std::regex line("^[a-z0-9_]+,(pass|fail)$");
  const auto ls = lines(ok.out);
  CHECK(ls.size() >= 8);
  for (const auto& l : ls) CHECK(std::regex_match(l, line));
  CHECK(ok.out.find("dct_parseval,pass") != std::string::npos);

  const Run bad = cli({"selftest", "--inject-fault"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("dct_parseval,fail") != std::string::npos);
  CHECK(bad.out.find("entropy_uniform,pass") != std::string::npos);
}

TEST_CASE("usage errors and help") {
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({}).code == 3);
  CHECK(cli({"detect"}).code == 3);
  CHECK(cli({"frobnicate"}).code == 3);
}

TEST_CASE("synth writes padded frames and ground truth deterministically") {
  TempDir dir("synth");
  const std::string scenario = kScenarios + "/occlusion_example.json";
  REQUIRE(cli({"synth", "--scenario", scenario, "--out", (dir / "a").string()}).code == 0);
  REQUIRE(cli({"synth", "--scenario", scenario, "--out", (dir / "b").string()}).code == 0);
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir / "a")) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  REQUIRE(names.size() == 301);
  for (std::size_t i = 0; i < 300; ++i) CHECK(names[i] == sequence_file_name(static_cast<std::int64_t>(i)));
  CHECK(names[300] == "ground_truth.json");
  for (const auto& n : names) CHECK(slurp(dir / "a" / n) == slurp(dir / "b" / n));
  const auto truth = synth::GroundTruth::from_json(slurp(dir / "a" / "ground_truth.json"));
  CHECK(truth.intervals.size() == 1);
  CHECK(truth.frames == 300);
}

TEST_CASE("synth rejects invalid scenarios without writing output") {
  TempDir dir("synthbad");
  spit(dir / "overlap.json", R"({"base": {"type": "textured", "frames": 50},
    "events": [{"kind": "defocus", "start": 5, "end": 20, "params": {"radius": 2}},
               {"kind": "defocus", "start": 10, "end": 30, "params": {"radius": 3}}]})");
  const Run r = cli({"synth", "--scenario", (dir / "overlap.json").string(), "--out", (dir / "out").string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("events[1]") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out"));

  spit(dir / "broken.json", "{\n  \"base\": {\"type\": \"textured\"},\n  \"events\": [\n");
  const Run b = cli({"synth", "--scenario", (dir / "broken.json").string(), "--out", (dir / "out").string()});
  CHECK(b.code == 3);
  CHECK(b.err.find("line") != std::string::npos);
  CHECK(cli({"synth", "--scenario", (dir / "missing.json").string(), "--out", (dir / "out").string()}).code == 2);
  CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("detect on the bundled occlusion scenario") {
  TempDir dir("detect");
  const std::string scenario = kScenarios + "/occlusion_example.json";
  REQUIRE(cli({"synth", "--scenario", scenario, "--out", (dir / "clip").string()}).code == 0);
  const Run r = cli({"detect", "--input", (dir / "clip").string(), "--detectors", "combined", "--out",
                     (dir / "det").string()});
  REQUIRE(r.code == 0);
  const auto events = lines(slurp(dir / "det" / "events.jsonl"));
  REQUIRE(events.size() == 1);
  const auto parsed = eval::events_from_jsonl(events[0]);
  CHECK(parsed[0].kind == TamperKind::Occlusion);
  CHECK(parsed[0].detector_id == "combined");
  CHECK(slurp(dir / "det" / "summary.txt").find("combined: 1 event(s)") != std::string::npos);

  // Scenario input, PGM directory input and the library agree bit for bit.
  REQUIRE(cli({"detect", "--input", scenario, "--detectors", "combined,alg5", "--out", (dir / "s").string()}).code == 0);
  REQUIRE(cli({"detect", "--input", (dir / "clip").string(), "--detectors", "combined,alg5", "--out",
               (dir / "p").string()})
              .code == 0);
  CHECK(slurp(dir / "s" / "events.jsonl") == slurp(dir / "p" / "events.jsonl"));
  const auto clip = synth::render(synth::parse_scenario(slurp(scenario)));
  auto lib = run_detector("combined", {}, clip.frames);
  auto lib5 = run_detector("alg5", {}, clip.frames);
  std::vector<TamperEvent> merged;
  std::size_t i = 0, j = 0;
  while (i < lib.size() || j < lib5.size()) {
    if (j == lib5.size() || (i < lib.size() && lib[i].frame_index <= lib5[j].frame_index)) {
      merged.push_back(lib[i++]);
    } else {
      merged.push_back(lib5[j++]);
    }
  }
  CHECK(slurp(dir / "p" / "events.jsonl") == eval::events_to_jsonl(merged));
}

TEST_CASE("detect on a clean static clip with all detectors is empty") {
  TempDir dir("static");
  spit(dir / "static.json", R"({"name": "static", "seed": 3,
    "base": {"type": "textured", "frames": 40, "noise": 0}})");
  REQUIRE(cli({"synth", "--scenario", (dir / "static.json").string(), "--out", (dir / "clip").string()}).code == 0);
  const Run r = cli({"detect", "--input", (dir / "clip").string(), "--detectors",
                     "alg1,alg2,alg3,alg4,alg5,motion,combined", "--out", (dir / "det").string()});
  CHECK(r.code == 0);
  CHECK(slurp(dir / "det" / "events.jsonl").empty());
}

TEST_CASE("detect error handling and config overrides") {
  TempDir dir("detecterr");
  const std::string scenario = kScenarios + "/occlusion_example.json";
  auto out = (dir / "o").string();
  CHECK(cli({"detect", "--input", (dir / "nope").string(), "--out", out}).code == 2);
  CHECK_FALSE(fs::exists(out));
  CHECK(cli({"detect", "--input", scenario, "--detectors", "alg9", "--out", out}).code == 3);
  CHECK(cli({"detect", "--input", scenario, "--set", "tau=999", "--out", out}).code == 3);
  CHECK(cli({"detect", "--input", scenario, "--set", "bogus=1", "--out", out}).code == 3);
  CHECK(cli({"detect", "--input", scenario, "--set", "tau", "--out", out}).code == 3);
  CHECK(cli({"detect", "--input", scenario, "--config", (dir / "none.json").string(), "--out", out}).code == 2);
  spit(dir / "bad.json", "{\"theta_B\": 7}");
  CHECK(cli({"detect", "--input", scenario, "--config", (dir / "bad.json").string(), "--out", out}).code == 3);
  spit(dir / "broken.y4m", "YUV4MPEG2 W8 H8 Cmono\nFRAME\nshort");
  CHECK(cli({"detect", "--input", (dir / "broken.y4m").string(), "--out", out}).code == 2);
  CHECK_FALSE(fs::exists(out));

  // Overrides reach the detectors: an impossible alpha_entropy silences alg1.
  spit(dir / "cfg.json", "{\"alpha_entropy\": 0.0}");
  REQUIRE(cli({"detect", "--input", scenario, "--detectors", "alg1", "--config", (dir / "cfg.json").string(),
               "--out", out})
              .code == 0);
  CHECK(slurp(dir / "o" / "events.jsonl").empty());
  REQUIRE(cli({"detect", "--input", scenario, "--detectors", "alg1", "--config", (dir / "cfg.json").string(),
               "--set", "alpha_entropy=0.5", "--out", out})
              .code == 0);
  CHECK(lines(slurp(dir / "o" / "events.jsonl")).size() == 1);
}

TEST_CASE("a detector that cannot start is disabled and the run continues") {
  TempDir dir("disable");
  std::vector<Frame> frames(5, Frame::filled(16, 16, 90));
  frames.push_back(Frame::filled(16, 16, 0));
  spit(dir / "flat.y4m", encode_y4m(frames, "Cmono"));
  const Run r = cli({"detect", "--input", (dir / "flat.y4m").string(), "--detectors", "alg3,motion", "--out",
                     (dir / "o").string()});
  CHECK(r.code == 0);
  CHECK(r.err.find("alg3 disabled") != std::string::npos);
  CHECK(slurp(dir / "o" / "summary.txt").find("alg3: 0 event(s) [disabled") != std::string::npos);
  CHECK(lines(slurp(dir / "o" / "events.jsonl")).size() == 1);
}

TEST_CASE("eval reports") {
  TempDir dir("eval");
  synth::GroundTruth truth{"c", 160, 120, 300, {{TamperKind::Occlusion, 100, 199}}};
  spit(dir / "truth.json", truth.to_json());
  spit(dir / "hit.jsonl", eval::events_to_jsonl(std::vector<TamperEvent>{{TamperKind::Occlusion, 100, 1.0, "x"}}));
  spit(dir / "empty.jsonl", "");
  spit(dir / "bad.jsonl", "{\"detector\": 3}\n");

  REQUIRE(cli({"eval", "--events", (dir / "hit.jsonl").string(), "--truth", (dir / "truth.json").string(), "--out",
               (dir / "r1").string()})
              .code == 0);
  CHECK(lines(slurp(dir / "r1" / "report.csv"))[1] == "c,x,occlusion,1,0,0,1.000000,0.000000,0.000");

  REQUIRE(cli({"eval", "--events", (dir / "empty.jsonl").string(), "--truth", (dir / "truth.json").string(),
               "--detectors", "combined", "--out", (dir / "r2").string()})
              .code == 0);
  CHECK(lines(slurp(dir / "r2" / "report.csv"))[1] == "c,combined,occlusion,0,0,1,0.000000,0.000000,");

  CHECK(cli({"eval", "--events", (dir / "bad.jsonl").string(), "--truth", (dir / "truth.json").string(), "--out",
             (dir / "r3").string()})
            .code == 3);
  CHECK(cli({"eval", "--events", (dir / "hit.jsonl").string(), "--truth", (dir / "nope.json").string(), "--out",
             (dir / "r3").string()})
            .code == 2);
  CHECK_FALSE(fs::exists(dir / "r3"));
}

TEST_CASE("cli pipeline matches library evaluation on the standard corpus") {
  TempDir dir("pipeline");
  REQUIRE(cli({"-q", "corpus", "--out", (dir / "corpus").string()}).code == 0);
  const std::vector<std::string> detectors{"combined", "alg5"};
  std::string cli_rows;
  std::vector<synth::RenderedClip> clips;
  for (const auto& sc : synth::standard_corpus()) {
    clips.push_back(synth::render(sc));
    const fs::path clip_dir = dir / "corpus" / sc.name;
    const fs::path det = dir / "det" / sc.name, rep = dir / "rep" / sc.name;
    REQUIRE(cli({"-q", "detect", "--input", clip_dir.string(), "--detectors", "combined,alg5", "--out", det.string()})
                .code == 0);
    REQUIRE(cli({"-q", "eval", "--events", (det / "events.jsonl").string(), "--truth",
                 (clip_dir / "ground_truth.json").string(), "--detectors", "combined,alg5", "--out", rep.string()})
                .code == 0);
    const auto ls = lines(slurp(rep / "report.csv"));
    for (std::size_t i = 1; i < ls.size(); ++i) cli_rows += ls[i] + "\n";
  }
  const auto combined = eval::evaluate("combined", {}, clips);
  const auto alg5 = eval::evaluate("alg5", {}, clips);
  std::vector<eval::ClipResult> rows;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    rows.push_back(combined.clips[i]);
    rows.push_back(alg5.clips[i]);
  }
  const std::string lib = eval::report_csv(rows);
  CHECK(cli_rows == lib.substr(lib.find('\n') + 1));
}

TEST_CASE("installed binary uses the exit-code contract") {
  const std::string bin = CAMTAMPER_BINARY;
  auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status(bin + " selftest") == 0);
  CHECK(status(bin + " selftest --inject-fault") == 1);
  CHECK(status(bin + " detect --input /nonexistent/dir --out /tmp/never_written") == 2);
  CHECK(status(bin + " detect --input x --out y --set persistence=0") == 3);
}
