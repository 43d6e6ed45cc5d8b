#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "camtamper/detectors.hpp"
#include "camtamper/frame.hpp"
#include "camtamper/frame_io.hpp"

namespace camtamper::synth {

struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  friend bool operator==(const Rect&, const Rect&) = default;
};

// Tamper transforms. All integer arithmetic; dimensions and index are preserved.

/// Sets every pixel inside `rect` to `fill`.
Frame apply_occlusion(const Frame& frame, const Rect& rect, int fill);
/// Three passes of box_blur(radius), a Gaussian-like defocus. radius >= 1.
Frame apply_defocus(const Frame& frame, int radius);
/// Moves content by (dx, dy); uncovered pixels take `fill`.
Frame apply_shift(const Frame& frame, int dx, int dy, int fill);

struct OcclusionParams {
  Rect rect;
  int fill = 0;
  friend bool operator==(const OcclusionParams&, const OcclusionParams&) = default;
};
struct DefocusParams {
  int radius = 1;
  friend bool operator==(const DefocusParams&, const DefocusParams&) = default;
};
struct ShiftParams {
  int dx = 0;
  int dy = 0;
  int fill = 0;
  friend bool operator==(const ShiftParams&, const ShiftParams&) = default;
};
using TransformParams = std::variant<OcclusionParams, DefocusParams, ShiftParams>;

TamperKind kind_of(const TransformParams& params);

/// A labeled tamper over frames [start, end]. With ramp_frames > 0 the effect
/// grows linearly over the first ramp_frames frames of the interval.
struct TamperSpec {
  std::int64_t start = 0;
  std::int64_t end = 0;
  TransformParams params;
  int ramp_frames = 0;

  TamperKind kind() const { return kind_of(params); }
};

/// A single corrupted frame that is not a tamper and gets no label.
struct Glitch {
  std::int64_t frame = 0;
  TransformParams params;
};

struct MovingSquare {
  int size = 14;
  int speed = 2;  // pixels per frame, bouncing horizontally
  int intensity = 230;
};

/// Static textured scene plus per-frame uniform noise in [-noise, noise].
/// The scene is a smooth gradient with small high-contrast features packed
/// into `detail_region` (default: bottom-right quadrant).
struct ProceduralBase {
  int width = 160;
  int height = 120;
  std::int64_t frames = 300;
  int noise = 2;
  std::optional<MovingSquare> square;
  std::optional<Rect> detail_region;

  Rect resolved_detail_region() const;
};

/// Existing footage used as the clean base (PGM directory or Y4M file).
struct StreamBase {
  std::string path;
};

struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  std::variant<ProceduralBase, StreamBase> base;
  std::vector<TamperSpec> events;
  std::vector<Glitch> glitches;
};

struct LabeledInterval {
  TamperKind kind = TamperKind::Generic;
  std::int64_t start = 0;
  std::int64_t end = 0;

  friend bool operator==(const LabeledInterval&, const LabeledInterval&) = default;
};

struct GroundTruth {
  std::string clip;
  int width = 0;
  int height = 0;
  std::int64_t frames = 0;
  std::vector<LabeledInterval> intervals;

  std::string to_json() const;
  static GroundTruth from_json(std::string_view text);

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

/// Parses a scenario document. Throws ValidationError naming the offending field.
Scenario parse_scenario(std::string_view json_text);
std::string scenario_to_json(const Scenario& scenario);

/// Checks intervals, same-kind overlaps, and transform parameters against the
/// frame geometry. Throws ValidationError.
void validate_scenario(const Scenario& scenario, int width, int height, std::int64_t frames);

struct GeneratedScenario {
  std::unique_ptr<FrameStream> stream;
  GroundTruth truth;
};

/// Renders lazily; each frame is computable independently of the others.
GeneratedScenario generate_scenario(const Scenario& scenario, std::uint64_t seed);
GeneratedScenario generate_scenario(const Scenario& scenario);

struct RenderedClip {
  std::string name;
  std::vector<Frame> frames;
  GroundTruth truth;
};

RenderedClip render(const Scenario& scenario);
/// Clean frames only: the same scenario with events and glitches removed.
std::vector<Frame> render_base(const Scenario& scenario);

/// The ten-clip evaluation corpus: full black and white occlusion, quarter
/// occlusion over the detail region, defocus r=5, horizontal shifts of 25% and
/// 50%, vertical shift of 25%, and three clean clips. 300 frames each.
std::vector<Scenario> standard_corpus(std::uint64_t seed = 2024);
/// Five clean clips each corrupted by one unlabeled single-frame glitch.
std::vector<Scenario> glitch_corpus(std::uint64_t seed = 2024);
/// standard_corpus followed by glitch_corpus.
std::vector<Scenario> stress_corpus(std::uint64_t seed = 2024);

}  // namespace camtamper::synth
