#include "camtamper/synth.hpp"

#include <algorithm>
#include <json.hpp>

#include "camtamper/errors.hpp"
#include "camtamper/imgproc.hpp"

namespace camtamper::synth {

using nlohmann::json;

namespace {

constexpr std::uint64_t kTextureSalt = 0x7465787475726531ULL;
constexpr std::uint64_t kNoiseSalt = 0x6e6f697365303031ULL;

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based: the value for (seed, a, b) does not depend on call order.
std::uint64_t hash3(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(mix64(seed) ^ a) ^ b);
}

class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  int uniform(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

std::uint8_t clamp_u8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

bool rect_inside(const Rect& r, int width, int height) {
  return r.x >= 0 && r.y >= 0 && r.width >= 0 && r.height >= 0 && r.x + r.width <= width &&
         r.y + r.height <= height;
}

// Rational strength k/(ramp+1) of a ramped event at offset `step` into the interval.
struct Strength {
  int num = 1;
  int den = 1;
  bool full() const { return num >= den; }
};

Strength strength_at(const TamperSpec& spec, std::int64_t frame) {
  if (spec.ramp_frames <= 0) return {};
  const std::int64_t step = frame - spec.start;
  if (step >= spec.ramp_frames) return {};
  return {static_cast<int>(step + 1), spec.ramp_frames + 1};
}

int scale_toward_zero_min_one(int value, Strength s) {
  if (value == 0 || s.full()) return value;
  const int mag = std::max(1, (std::abs(value) * s.num + s.den / 2) / s.den);
  return value < 0 ? -mag : mag;
}

Frame apply_params(const Frame& frame, const TransformParams& params, Strength s) {
  return std::visit(
      [&](const auto& p) -> Frame {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, OcclusionParams>) {
          if (s.full()) return apply_occlusion(frame, p.rect, p.fill);
          // Partially opaque occluder: integer blend toward the fill.
          if (!rect_inside(p.rect, frame.width(), frame.height())) {
            throw DomainError("occlusion rectangle outside the frame");
          }
          std::vector<std::uint8_t> px(frame.luma().begin(), frame.luma().end());
          for (int y = p.rect.y; y < p.rect.y + p.rect.height; ++y) {
            for (int x = p.rect.x; x < p.rect.x + p.rect.width; ++x) {
              auto& v = px[static_cast<std::size_t>(y) * frame.width() + x];
              v = static_cast<std::uint8_t>((v * (s.den - s.num) + p.fill * s.num + s.den / 2) / s.den);
            }
          }
          return Frame(frame.width(), frame.height(), std::move(px), frame.index());
        } else if constexpr (std::is_same_v<T, DefocusParams>) {
          return apply_defocus(frame, scale_toward_zero_min_one(p.radius, s));
        } else {
          return apply_shift(frame, scale_toward_zero_min_one(p.dx, s),
                             scale_toward_zero_min_one(p.dy, s), p.fill);
        }
      },
      params);
}

// Renders frames of a scenario on demand.
class Renderer {
 public:
  Renderer(const Scenario& scenario, std::uint64_t seed) : scenario_(scenario), seed_(seed) {
    if (const auto* proc = std::get_if<ProceduralBase>(&scenario.base)) {
      width_ = proc->width;
      height_ = proc->height;
      frames_ = proc->frames;
      if (width_ < 1 || height_ < 1) throw ValidationError("base: width and height must be positive");
      if (frames_ < 1) throw ValidationError("base.frames: must be at least 1");
      if (proc->noise < 0 || proc->noise > 127) throw ValidationError("base.noise: must lie in [0, 127]");
      build_scene(*proc);
    } else {
      const auto& sb = std::get<StreamBase>(scenario.base);
      auto stream = open_stream(sb.path);
      footage_ = read_all(*stream);
      if (footage_.empty()) throw IoError("base footage is empty: " + sb.path);
      width_ = footage_.front().width();
      height_ = footage_.front().height();
      frames_ = static_cast<std::int64_t>(footage_.size());
    }
    validate_scenario(scenario, width_, height_, frames_);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::int64_t frames() const { return frames_; }

  Frame base(std::int64_t k) const {
    if (!footage_.empty()) return footage_[static_cast<std::size_t>(k)].with_index(k);
    const auto& proc = std::get<ProceduralBase>(scenario_.base);
    std::vector<std::uint8_t> px = scene_;
    if (proc.square) paint_square(px, *proc.square, k);
    if (proc.noise > 0) {
      const auto span = static_cast<std::uint64_t>(2 * proc.noise + 1);
      for (std::size_t i = 0; i < px.size(); ++i) {
        const int n = static_cast<int>(hash3(seed_ ^ kNoiseSalt, static_cast<std::uint64_t>(k), i) % span) -
                      proc.noise;
        px[i] = clamp_u8(px[i] + n);
      }
    }
    return Frame(width_, height_, std::move(px), k);
  }

  Frame render(std::int64_t k) const {
    Frame f = base(k);
    for (const auto& ev : scenario_.events) {
      if (k >= ev.start && k <= ev.end) f = apply_params(f, ev.params, strength_at(ev, k));
    }
    for (const auto& g : scenario_.glitches) {
      if (g.frame == k) f = apply_params(f, g.params, Strength{});
    }
    return f;
  }

 private:
  void build_scene(const ProceduralBase& proc) {
    scene_.assign(static_cast<std::size_t>(width_) * height_, 0);
    const int wd = std::max(1, width_ - 1);
    const int hd = std::max(1, height_ - 1);
    auto gradient = [&](int x, int y) { return 70 + (120 * x) / wd + (20 * y) / hd; };
    for (int y = 0; y < height_; ++y)
      for (int x = 0; x < width_; ++x)
        scene_[static_cast<std::size_t>(y) * width_ + x] = clamp_u8(gradient(x, y));

    const Rect region = proc.resolved_detail_region();
    if (!rect_inside(region, width_, height_)) {
      throw ValidationError("base.detail_region: must lie inside the frame");
    }
    SplitMix rng(mix64(seed_ ^ kTextureSalt));
    const int features = region.width * region.height / 60;
    for (int i = 0; i < features; ++i) {
      const int fw = std::min(region.width, rng.uniform(1, 3));
      const int fh = std::min(region.height, rng.uniform(1, 3));
      const int fx = region.x + rng.uniform(0, region.width - fw);
      const int fy = region.y + rng.uniform(0, region.height - fh);
      const int offset = rng.uniform(40, 90) * (rng.uniform(0, 1) ? 1 : -1);
      for (int y = fy; y < fy + fh; ++y)
        for (int x = fx; x < fx + fw; ++x)
          scene_[static_cast<std::size_t>(y) * width_ + x] =
              static_cast<std::uint8_t>(std::clamp(gradient(x, y) + offset, 30, 225));
    }
  }

  void paint_square(std::vector<std::uint8_t>& px, const MovingSquare& sq, std::int64_t k) const {
    const int size = std::clamp(sq.size, 0, std::min(width_, height_));
    if (size == 0) return;
    const int travel = width_ - size;
    int x0 = 0;
    if (travel > 0) {
      const std::int64_t period = 2LL * travel;
      const std::int64_t p = (k * sq.speed) % period;
      x0 = static_cast<int>(p <= travel ? p : period - p);
    }
    const int y0 = std::max(0, height_ / 4 - size / 2);
    for (int y = y0; y < std::min(height_, y0 + size); ++y)
      for (int x = x0; x < x0 + size; ++x)
        px[static_cast<std::size_t>(y) * width_ + x] = clamp_u8(sq.intensity);
  }

  const Scenario& scenario_;
  std::uint64_t seed_;
  int width_ = 0;
  int height_ = 0;
  std::int64_t frames_ = 0;
  std::vector<std::uint8_t> scene_;
  std::vector<Frame> footage_;
};

class ScenarioStream final : public FrameStream {
 public:
  ScenarioStream(Scenario scenario, std::uint64_t seed)
      : FrameStream(scenario.name, 0, 0),
        scenario_(std::make_unique<Scenario>(std::move(scenario))),
        renderer_(std::make_unique<Renderer>(*scenario_, seed)) {
    width_ = renderer_->width();
    height_ = renderer_->height();
  }

  std::int64_t frames() const { return renderer_->frames(); }

  std::optional<Frame> next() override {
    if (cursor_ >= renderer_->frames()) return std::nullopt;
    return renderer_->render(cursor_++);
  }

 private:
  std::unique_ptr<Scenario> scenario_;
  std::unique_ptr<Renderer> renderer_;
  std::int64_t cursor_ = 0;
};

GroundTruth truth_for(const Scenario& s, int width, int height, std::int64_t frames) {
  GroundTruth t{s.name, width, height, frames, {}};
  for (const auto& ev : s.events) t.intervals.push_back({ev.kind(), ev.start, ev.end});
  return t;
}

// --- JSON helpers --------------------------------------------------------

[[noreturn]] void invalid(const std::string& path, const std::string& msg) {
  throw ValidationError(path + ": " + msg);
}

const json& member(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) invalid(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) invalid(path + "." + key, "missing");
  return *it;
}

std::int64_t as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) invalid(path, "expected an integer");
  return v.get<std::int64_t>();
}

int int_field(const json& obj, const std::string& path, const char* key, std::optional<int> fallback = {}) {
  if (fallback && (!obj.is_object() || !obj.contains(key))) return *fallback;
  std::int64_t v = as_int(member(obj, path, key), path + "." + key);
  if (v < INT32_MIN || v > INT32_MAX) invalid(path + "." + key, "out of range");
  return static_cast<int>(v);
}

Rect parse_rect(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 4) invalid(path, "expected [x, y, width, height]");
  return Rect{static_cast<int>(as_int(v[0], path + "[0]")), static_cast<int>(as_int(v[1], path + "[1]")),
              static_cast<int>(as_int(v[2], path + "[2]")), static_cast<int>(as_int(v[3], path + "[3]"))};
}

json rect_json(const Rect& r) { return json::array({r.x, r.y, r.width, r.height}); }

TransformParams parse_params(const json& obj, const std::string& path, std::string_view kind) {
  const std::string pp = path + ".params";
  const json& p = member(obj, path, "params");
  if (kind == "occlusion") {
    return OcclusionParams{parse_rect(member(p, pp, "rect"), pp + ".rect"), int_field(p, pp, "fill", 0)};
  }
  if (kind == "defocus") return DefocusParams{int_field(p, pp, "radius")};
  if (kind == "motion") {
    return ShiftParams{int_field(p, pp, "dx", 0), int_field(p, pp, "dy", 0), int_field(p, pp, "fill", 0)};
  }
  invalid(path + ".kind", "expected occlusion, defocus or motion");
}

json params_json(const TransformParams& params) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, OcclusionParams>) {
          return {{"rect", rect_json(p.rect)}, {"fill", p.fill}};
        } else if constexpr (std::is_same_v<T, DefocusParams>) {
          return {{"radius", p.radius}};
        } else {
          return {{"dx", p.dx}, {"dy", p.dy}, {"fill", p.fill}};
        }
      },
      params);
}

std::string kind_field(const json& obj, const std::string& path) {
  const json& k = member(obj, path, "kind");
  if (!k.is_string()) invalid(path + ".kind", "expected a string");
  return k.get<std::string>();
}

void validate_params(const TransformParams& params, const std::string& path, int width, int height) {
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, OcclusionParams>) {
          if (!rect_inside(p.rect, width, height)) invalid(path + ".params.rect", "outside the frame");
          if (p.fill < 0 || p.fill > 255) invalid(path + ".params.fill", "must lie in [0, 255]");
        } else if constexpr (std::is_same_v<T, DefocusParams>) {
          if (p.radius < 1) invalid(path + ".params.radius", "must be at least 1");
        } else {
          if (std::abs(p.dx) >= width) invalid(path + ".params.dx", "|dx| must be below the width");
          if (std::abs(p.dy) >= height) invalid(path + ".params.dy", "|dy| must be below the height");
          if (p.fill < 0 || p.fill > 255) invalid(path + ".params.fill", "must lie in [0, 255]");
        }
      },
      params);
}

}  // namespace

// ---------------------------------------------------------------------------

Frame apply_occlusion(const Frame& frame, const Rect& rect, int fill) {
  if (!rect_inside(rect, frame.width(), frame.height())) {
    throw DomainError("occlusion rectangle outside the frame");
  }
  if (fill < 0 || fill > 255) throw DomainError("occlusion fill must lie in [0, 255]");
  std::vector<std::uint8_t> px(frame.luma().begin(), frame.luma().end());
  for (int y = rect.y; y < rect.y + rect.height; ++y) {
    auto row = px.begin() + static_cast<std::ptrdiff_t>(y) * frame.width();
    std::fill(row + rect.x, row + rect.x + rect.width, static_cast<std::uint8_t>(fill));
  }
  return Frame(frame.width(), frame.height(), std::move(px), frame.index());
}

Frame apply_defocus(const Frame& frame, int radius) {
  if (radius < 1) throw DomainError("defocus radius must be at least 1");
  return imgproc::box_blur(imgproc::box_blur(imgproc::box_blur(frame, radius), radius), radius);
}

Frame apply_shift(const Frame& frame, int dx, int dy, int fill) {
  const int w = frame.width();
  const int h = frame.height();
  if (std::abs(dx) >= w || std::abs(dy) >= h) throw DomainError("shift magnitude out of range");
  if (fill < 0 || fill > 255) throw DomainError("shift fill must lie in [0, 255]");
  std::vector<std::uint8_t> px(frame.size(), static_cast<std::uint8_t>(fill));
  for (int y = 0; y < h; ++y) {
    const int sy = y - dy;
    if (sy < 0 || sy >= h) continue;
    for (int x = 0; x < w; ++x) {
      const int sx = x - dx;
      if (sx >= 0 && sx < w) px[static_cast<std::size_t>(y) * w + x] = frame.at(sx, sy);
    }
  }
  return Frame(w, h, std::move(px), frame.index());
}

TamperKind kind_of(const TransformParams& params) {
  switch (params.index()) {
    case 0: return TamperKind::Occlusion;
    case 1: return TamperKind::Defocus;
    default: return TamperKind::Motion;
  }
}

Rect ProceduralBase::resolved_detail_region() const {
  if (detail_region) return *detail_region;
  return Rect{width / 2, height / 2, width - width / 2, height - height / 2};
}

// ---------------------------------------------------------------------------

std::string GroundTruth::to_json() const {
  json events = json::array();
  for (const auto& iv : intervals) {
    events.push_back({{"kind", std::string(camtamper::to_string(iv.kind))}, {"start", iv.start}, {"end", iv.end}});
  }
  json j = {{"clip", clip}, {"width", width}, {"height", height}, {"frames", frames}, {"events", events}};
  return j.dump(2) + "\n";
}

GroundTruth GroundTruth::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("ground truth JSON: ") + e.what());
  }
  GroundTruth t;
  const std::string root = "truth";
  const json& clip = member(j, root, "clip");
  if (!clip.is_string()) invalid("truth.clip", "expected a string");
  t.clip = clip.get<std::string>();
  t.width = int_field(j, root, "width", 0);
  t.height = int_field(j, root, "height", 0);
  t.frames = as_int(member(j, root, "frames"), "truth.frames");
  const json& events = member(j, root, "events");
  if (!events.is_array()) invalid("truth.events", "expected an array");
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::string path = "truth.events[" + std::to_string(i) + "]";
    LabeledInterval iv;
    iv.kind = parse_tamper_kind(kind_field(events[i], path));
    iv.start = as_int(member(events[i], path, "start"), path + ".start");
    iv.end = as_int(member(events[i], path, "end"), path + ".end");
    if (iv.start < 0 || iv.end < iv.start) invalid(path, "interval must satisfy 0 <= start <= end");
    t.intervals.push_back(iv);
  }
  return t;
}

Scenario parse_scenario(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario JSON: ") + e.what());
  }
  if (!j.is_object()) invalid("scenario", "expected an object");
  Scenario s;
  if (j.contains("name")) {
    if (!j["name"].is_string()) invalid("name", "expected a string");
    s.name = j["name"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) invalid("seed", "expected a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }

  const json& base = member(j, "scenario", "base");
  const json& type_v = member(base, "base", "type");
  if (!type_v.is_string()) invalid("base.type", "expected a string");
  const std::string type = type_v.get<std::string>();
  if (type == "textured" || type == "moving_square") {
    ProceduralBase pb;
    pb.width = int_field(base, "base", "width", pb.width);
    pb.height = int_field(base, "base", "height", pb.height);
    if (base.contains("frames")) pb.frames = as_int(base["frames"], "base.frames");
    pb.noise = int_field(base, "base", "noise", pb.noise);
    if (type == "moving_square") pb.square = MovingSquare{};
    if (base.contains("moving_square")) {
      const json& sq = base["moving_square"];
      if (sq.is_null()) {
        pb.square.reset();
      } else {
        MovingSquare m;
        m.size = int_field(sq, "base.moving_square", "size", m.size);
        m.speed = int_field(sq, "base.moving_square", "speed", m.speed);
        m.intensity = int_field(sq, "base.moving_square", "intensity", m.intensity);
        if (m.size < 0) invalid("base.moving_square.size", "must be non-negative");
        if (m.speed < 0) invalid("base.moving_square.speed", "must be non-negative");
        pb.square = m;
      }
    }
    if (base.contains("detail_region")) pb.detail_region = parse_rect(base["detail_region"], "base.detail_region");
    s.base = pb;
  } else if (type == "pgm_dir" || type == "y4m") {
    const json& p = member(base, "base", "path");
    if (!p.is_string()) invalid("base.path", "expected a string");
    s.base = StreamBase{p.get<std::string>()};
  } else {
    invalid("base.type", "expected textured, moving_square, pgm_dir or y4m");
  }

  if (j.contains("events")) {
    const json& events = j["events"];
    if (!events.is_array()) invalid("events", "expected an array");
    for (std::size_t i = 0; i < events.size(); ++i) {
      const std::string path = "events[" + std::to_string(i) + "]";
      const std::string kind = kind_field(events[i], path);
      TamperSpec spec;
      spec.params = parse_params(events[i], path, kind);
      spec.start = as_int(member(events[i], path, "start"), path + ".start");
      spec.end = as_int(member(events[i], path, "end"), path + ".end");
      spec.ramp_frames = int_field(events[i], path, "ramp_frames", 0);
      s.events.push_back(spec);
    }
  }
  if (j.contains("glitches")) {
    const json& glitches = j["glitches"];
    if (!glitches.is_array()) invalid("glitches", "expected an array");
    for (std::size_t i = 0; i < glitches.size(); ++i) {
      const std::string path = "glitches[" + std::to_string(i) + "]";
      Glitch g;
      g.params = parse_params(glitches[i], path, kind_field(glitches[i], path));
      g.frame = as_int(member(glitches[i], path, "frame"), path + ".frame");
      s.glitches.push_back(g);
    }
  }
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  json base;
  if (const auto* pb = std::get_if<ProceduralBase>(&s.base)) {
    base = {{"type", "textured"}, {"width", pb->width}, {"height", pb->height},
            {"frames", pb->frames}, {"noise", pb->noise}};
    base["moving_square"] = pb->square ? json{{"size", pb->square->size},
                                              {"speed", pb->square->speed},
                                              {"intensity", pb->square->intensity}}
                                       : json(nullptr);
    if (pb->detail_region) base["detail_region"] = rect_json(*pb->detail_region);
  } else {
    const auto& sb = std::get<StreamBase>(s.base);
    const bool y4m = sb.path.size() >= 4 && sb.path.substr(sb.path.size() - 4) == ".y4m";
    base = {{"type", y4m ? "y4m" : "pgm_dir"}, {"path", sb.path}};
  }
  json events = json::array();
  for (const auto& ev : s.events) {
    events.push_back({{"kind", std::string(camtamper::to_string(ev.kind()))},
                      {"start", ev.start},
                      {"end", ev.end},
                      {"ramp_frames", ev.ramp_frames},
                      {"params", params_json(ev.params)}});
  }
  json glitches = json::array();
  for (const auto& g : s.glitches) {
    glitches.push_back({{"kind", std::string(camtamper::to_string(kind_of(g.params)))},
                        {"frame", g.frame},
                        {"params", params_json(g.params)}});
  }
  json j = {{"name", s.name}, {"seed", s.seed}, {"base", base}, {"events", events}, {"glitches", glitches}};
  return j.dump(2) + "\n";
}

void validate_scenario(const Scenario& s, int width, int height, std::int64_t frames) {
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    const auto& ev = s.events[i];
    const std::string path = "events[" + std::to_string(i) + "]";
    if (ev.start < 0 || ev.end < ev.start || ev.end >= frames) {
      invalid(path, "interval [" + std::to_string(ev.start) + ", " + std::to_string(ev.end) +
                        "] must lie within [0, " + std::to_string(frames - 1) + "]");
    }
    if (ev.ramp_frames < 0) invalid(path + ".ramp_frames", "must be non-negative");
    validate_params(ev.params, path, width, height);
    for (std::size_t k = 0; k < i; ++k) {
      const auto& other = s.events[k];
      if (other.kind() == ev.kind() && other.start <= ev.end && ev.start <= other.end) {
        invalid(path, "overlaps events[" + std::to_string(k) + "] of the same kind");
      }
    }
  }
  for (std::size_t i = 0; i < s.glitches.size(); ++i) {
    const std::string path = "glitches[" + std::to_string(i) + "]";
    if (s.glitches[i].frame < 0 || s.glitches[i].frame >= frames) invalid(path + ".frame", "outside the stream");
    validate_params(s.glitches[i].params, path, width, height);
  }
}

GeneratedScenario generate_scenario(const Scenario& scenario, std::uint64_t seed) {
  auto stream = std::make_unique<ScenarioStream>(scenario, seed);
  GroundTruth truth = truth_for(scenario, stream->width(), stream->height(), stream->frames());
  return {std::move(stream), std::move(truth)};
}

GeneratedScenario generate_scenario(const Scenario& scenario) {
  return generate_scenario(scenario, scenario.seed);
}

RenderedClip render(const Scenario& scenario) {
  Renderer r(scenario, scenario.seed);
  RenderedClip clip{scenario.name, {}, truth_for(scenario, r.width(), r.height(), r.frames())};
  clip.frames.reserve(static_cast<std::size_t>(r.frames()));
  for (std::int64_t k = 0; k < r.frames(); ++k) clip.frames.push_back(r.render(k));
  return clip;
}

std::vector<Frame> render_base(const Scenario& scenario) {
  Scenario clean = scenario;
  clean.events.clear();
  clean.glitches.clear();
  return render(clean).frames;
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kCorpusWidth = 160;
constexpr int kCorpusHeight = 120;
constexpr std::int64_t kCorpusFrames = 300;
constexpr std::int64_t kEventStart = 100;
constexpr std::int64_t kEventEnd = 199;
constexpr std::int64_t kGlitchFrame = 150;
// Mid-gray border: a black bar would dominate the edge statistics of the shifted view.
constexpr int kShiftFill = 128;

Scenario corpus_clip(std::string name, std::uint64_t seed) {
  Scenario s;
  s.name = std::move(name);
  s.seed = seed;
  ProceduralBase pb;
  pb.width = kCorpusWidth;
  pb.height = kCorpusHeight;
  pb.frames = kCorpusFrames;
  pb.noise = 2;
  pb.square = MovingSquare{};
  s.base = pb;
  return s;
}

Scenario with_event(Scenario s, TransformParams params) {
  s.events.push_back(TamperSpec{kEventStart, kEventEnd, std::move(params), 0});
  return s;
}

Scenario with_glitch(Scenario s, TransformParams params) {
  s.glitches.push_back(Glitch{kGlitchFrame, std::move(params)});
  return s;
}

}  // namespace

std::vector<Scenario> standard_corpus(std::uint64_t seed) {
  const Rect full{0, 0, kCorpusWidth, kCorpusHeight};
  const Rect quarter = std::get<ProceduralBase>(corpus_clip("", 0).base).resolved_detail_region();
  auto clip_seed = [seed](std::uint64_t i) { return seed * 1000 + i; };
  return {
      with_event(corpus_clip("occlusion_full_black", clip_seed(1)), OcclusionParams{full, 0}),
      with_event(corpus_clip("occlusion_full_white", clip_seed(2)), OcclusionParams{full, 255}),
      with_event(corpus_clip("occlusion_quarter", clip_seed(3)), OcclusionParams{quarter, 0}),
      with_event(corpus_clip("defocus_r5", clip_seed(4)), DefocusParams{5}),
      with_event(corpus_clip("shift_h25", clip_seed(5)), ShiftParams{-kCorpusWidth / 4, 0, kShiftFill}),
      with_event(corpus_clip("shift_h50", clip_seed(6)), ShiftParams{-kCorpusWidth / 2, 0, kShiftFill}),
      with_event(corpus_clip("shift_v25", clip_seed(7)), ShiftParams{0, -kCorpusHeight / 4, kShiftFill}),
      corpus_clip("clean_1", clip_seed(8)),
      corpus_clip("clean_2", clip_seed(9)),
      corpus_clip("clean_3", clip_seed(10)),
  };
}

std::vector<Scenario> glitch_corpus(std::uint64_t seed) {
  const Rect full{0, 0, kCorpusWidth, kCorpusHeight};
  const Rect quarter = std::get<ProceduralBase>(corpus_clip("", 0).base).resolved_detail_region();
  auto clip_seed = [seed](std::uint64_t i) { return seed * 1000 + 100 + i; };
  return {
      with_glitch(corpus_clip("glitch_black", clip_seed(1)), OcclusionParams{full, 0}),
      with_glitch(corpus_clip("glitch_white", clip_seed(2)), OcclusionParams{full, 255}),
      with_glitch(corpus_clip("glitch_quarter", clip_seed(3)), OcclusionParams{quarter, 0}),
      with_glitch(corpus_clip("glitch_blur", clip_seed(4)), DefocusParams{5}),
      with_glitch(corpus_clip("glitch_shift", clip_seed(5)), ShiftParams{-kCorpusWidth / 4, 0, kShiftFill}),
  };
}

std::vector<Scenario> stress_corpus(std::uint64_t seed) {
  auto all = standard_corpus(seed);
  auto glitches = glitch_corpus(seed);
  all.insert(all.end(), glitches.begin(), glitches.end());
  return all;
}

}  // namespace camtamper::synth
