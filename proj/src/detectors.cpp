#include "camtamper/detectors.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>

#include <json.hpp>

#include "camtamper/errors.hpp"

namespace camtamper {

using nlohmann::json;

std::string_view to_string(TamperKind kind) {
  switch (kind) {
    case TamperKind::Occlusion: return "occlusion";
    case TamperKind::Defocus: return "defocus";
    case TamperKind::Motion: return "motion";
    case TamperKind::Generic: return "generic";
  }
  return "generic";
}

TamperKind parse_tamper_kind(std::string_view name) {
  if (name == "occlusion") return TamperKind::Occlusion;
  if (name == "defocus") return TamperKind::Defocus;
  if (name == "motion") return TamperKind::Motion;
  if (name == "generic") return TamperKind::Generic;
  throw ValidationError("unknown tamper kind '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// DetectorConfig

namespace {

struct FieldRef {
  double DetectorConfig::*real = nullptr;
  int DetectorConfig::*integer = nullptr;
};

const std::map<std::string, FieldRef, std::less<>>& field_table() {
  static const std::map<std::string, FieldRef, std::less<>> table = {
      {"alpha_entropy", {&DetectorConfig::alpha_entropy, nullptr}},
      {"tau", {&DetectorConfig::tau, nullptr}},
      {"theta_B", {&DetectorConfig::theta_b, nullptr}},
      {"n_hist", {nullptr, &DetectorConfig::n_hist}},
      {"theta_obstruction", {&DetectorConfig::theta_obstruction, nullptr}},
      {"theta_contour", {&DetectorConfig::theta_contour, nullptr}},
      {"beta_L", {&DetectorConfig::beta_l, nullptr}},
      {"eps_dct", {&DetectorConfig::eps_dct, nullptr}},
      {"eps_fft", {&DetectorConfig::eps_fft, nullptr}},
      {"alpha_edge", {&DetectorConfig::alpha_edge, nullptr}},
      {"persistence", {nullptr, &DetectorConfig::persistence}},
      {"cooldown", {nullptr, &DetectorConfig::cooldown}},
      {"alpha_background", {&DetectorConfig::alpha_background, nullptr}},
  };
  return table;
}

const FieldRef& lookup_field(std::string_view name) {
  const auto& table = field_table();
  if (auto it = table.find(name); it != table.end()) return it->second;
  // Lower-case aliases for the two mixed-case names.
  if (name == "theta_b") return table.at("theta_B");
  if (name == "beta_l") return table.at("beta_L");
  throw ConfigError("unknown detector parameter '" + std::string(name) + "'");
}

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("detector config: ") + what);
}

}  // namespace

void DetectorConfig::validate() const {
  require(std::isfinite(alpha_entropy) && alpha_entropy >= 0.0 && alpha_entropy <= 1.0,
          "alpha_entropy must lie in [0, 1]");
  require(tau >= 0.0 && tau <= 255.0, "tau must lie in [0, 255]");
  require(theta_b > 0.0 && theta_b <= 1.0, "theta_B must lie in (0, 1]");
  require(n_hist >= 0 && n_hist <= 255, "n_hist must lie in [0, 255]");
  require(std::isfinite(theta_obstruction) && theta_obstruction > 0.0,
          "theta_obstruction must be positive");
  require(theta_contour > 0.0 && theta_contour < 1.0, "theta_contour must lie in (0, 1)");
  require(beta_l >= 0.0 && beta_l <= 1.0, "beta_L must lie in [0, 1]");
  require(std::isfinite(eps_dct) && eps_dct >= 0.0, "eps_dct must be non-negative");
  require(std::isfinite(eps_fft) && eps_fft >= 0.0, "eps_fft must be non-negative");
  require(std::isfinite(alpha_edge) && alpha_edge > 0.0, "alpha_edge must be positive");
  require(persistence >= 1, "persistence must be at least 1");
  require(cooldown >= 0, "cooldown must be non-negative");
  require(alpha_background >= 0.0 && alpha_background <= 1.0,
          "alpha_background must lie in [0, 1]");
}

void DetectorConfig::set(std::string_view name, std::string_view value) {
  const FieldRef& f = lookup_field(name);
  const char* first = value.data();
  const char* last = value.data() + value.size();
  if (f.integer) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      throw ConfigError("parameter '" + std::string(name) + "' expects an integer, got '" +
                        std::string(value) + "'");
    }
    this->*f.integer = v;
  } else {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw ConfigError("parameter '" + std::string(name) + "' expects a number, got '" +
                        std::string(value) + "'");
    }
    this->*f.real = v;
  }
}

void DetectorConfig::set_value(std::string_view name, double value) {
  const FieldRef& f = lookup_field(name);
  if (!std::isfinite(value)) {
    throw ConfigError("parameter '" + std::string(name) + "' must be finite");
  }
  if (f.integer) {
    if (value != std::floor(value) || std::abs(value) > 1e9) {
      throw ConfigError("parameter '" + std::string(name) + "' expects an integer");
    }
    this->*f.integer = static_cast<int>(value);
  } else {
    this->*f.real = value;
  }
}

double DetectorConfig::get(std::string_view name) const {
  const FieldRef& f = lookup_field(name);
  return f.integer ? static_cast<double>(this->*f.integer) : this->*f.real;
}

const std::vector<std::string>& DetectorConfig::field_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : field_table()) v.push_back(k);
    return v;
  }();
  return names;
}

std::string DetectorConfig::to_json() const {
  json j = json::object();
  for (const auto& [name, f] : field_table()) {
    if (f.integer) {
      j[name] = this->*f.integer;
    } else {
      j[name] = this->*f.real;
    }
  }
  return j.dump(2);
}

DetectorConfig DetectorConfig::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config JSON must be an object");
  DetectorConfig cfg;
  for (const auto& [key, value] : j.items()) {
    const FieldRef& f = lookup_field(key);
    if (!value.is_number()) throw ConfigError("config field '" + key + "' must be a number");
    if (f.integer) {
      if (!value.is_number_integer()) throw ConfigError("config field '" + key + "' must be an integer");
      cfg.*f.integer = value.get<int>();
    } else {
      cfg.*f.real = value.get<double>();
    }
  }
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------

Detector::Detector(DetectorConfig config) : config_(std::move(config)) { config_.validate(); }

TamperEvent Detector::make_event(TamperKind kind, const Frame& frame, double score) const {
  return TamperEvent{kind, frame.index(), score, std::string(id())};
}

// Entropy ratio ------------------------------------------------------------

EntropyOcclusionDetector::EntropyOcclusionDetector(DetectorConfig config)
    : Detector(std::move(config)) {}

std::optional<TamperEvent> EntropyOcclusionDetector::step(const Frame& frame) {
  const double current = imgproc::entropy(imgproc::histogram(frame));
  std::optional<TamperEvent> event;
  if (previous_entropy_) {
    const double ratio = *previous_entropy_ < kMinPreviousEntropy ? 1.0 : current / *previous_entropy_;
    if (ratio < config_.alpha_entropy) event = make_event(TamperKind::Occlusion, frame, ratio);
  }
  previous_entropy_ = current;
  return event;
}

// Histogram / contour ------------------------------------------------------

FrameFeatures FrameFeatures::compute(const Frame& frame) {
  FrameFeatures f{frame, imgproc::histogram(frame), imgproc::edge_map(frame), 0};
  f.edge_count = f.edges.count();
  return f;
}

double HistContourPhases::window_ratio() const {
  return static_cast<double>(current_window) /
         static_cast<double>(std::max<std::uint64_t>(delayed_window, 1));
}

HistContourPhases hist_contour_phases(const FrameFeatures& current, const FrameFeatures& delayed,
                                      const DetectorConfig& config) {
  HistContourPhases p;
  p.peak = current.hist.argmax();
  p.current_window = current.hist.window_sum(p.peak, config.n_hist);
  p.delayed_window = delayed.hist.window_sum(p.peak, config.n_hist);
  p.hist = static_cast<double>(p.current_window) >=
           static_cast<double>(p.delayed_window) * config.theta_obstruction;
  p.contour = static_cast<double>(current.edge_count) <=
              static_cast<double>(delayed.edge_count) * config.theta_contour;
  return p;
}

HuangDetector::HuangDetector(DetectorConfig config) : Detector(std::move(config)) {}

std::optional<TamperEvent> HuangDetector::step(const Frame& frame) {
  if (previous_ && !frame.same_shape(previous_->frame)) {
    throw DomainError("alg2: frame dimensions changed mid-stream");
  }
  FrameFeatures current = FrameFeatures::compute(frame);
  std::optional<TamperEvent> event;
  if (previous_) {
    const DiffResult diff = frame_diff(frame, previous_->frame, config_.tau);
    if (diff.changed_fraction > config_.theta_b) {
      const HistContourPhases p = hist_contour_phases(current, *previous_, config_);
      if (p.hist && p.contour) {
        event = make_event(TamperKind::Occlusion, frame, p.window_ratio());
      } else if (!p.hist && !p.contour) {
        event = make_event(TamperKind::Motion, frame, diff.changed_fraction);
      }
    }
  }
  previous_ = std::move(current);
  return event;
}

// High-frequency defocus ---------------------------------------------------

std::optional<TamperEvent> HfDefocusDetector::step(const Frame& frame) {
  if (unusable_) return std::nullopt;
  const std::size_t q = hf_count(frame);
  last_count_ = q;
  if (!base_count_) {
    if (q == 0) {
      unusable_ = true;
      throw ConfigError(std::string(id()) +
                        ": reference frame has no high-frequency content; detector disabled");
    }
    base_count_ = q;
    return std::nullopt;
  }
  const double base = static_cast<double>(*base_count_);
  if (static_cast<double>(q) < base * config_.beta_l) {
    return make_event(TamperKind::Defocus, frame, static_cast<double>(q) / base);
  }
  return std::nullopt;
}

DctDefocusDetector::DctDefocusDetector(DetectorConfig config) : HfDefocusDetector(std::move(config)) {}

std::size_t DctDefocusDetector::hf_count(const Frame& frame) const {
  return imgproc::count_hf_nonzero_dct(imgproc::dct2(frame), config_.eps_dct);
}

FftDefocusDetector::FftDefocusDetector(DetectorConfig config) : HfDefocusDetector(std::move(config)) {}

std::size_t FftDefocusDetector::hf_count(const Frame& frame) const {
  const double scale = std::sqrt(static_cast<double>(frame.width()) * frame.height());
  return imgproc::count_hf_nonzero_fft(imgproc::fft2(frame), config_.eps_fft / scale);
}

// Edge change --------------------------------------------------------------

EdgeTamperDetector::EdgeTamperDetector(DetectorConfig config) : Detector(std::move(config)) {}

EdgeTamperDetector::Decision EdgeTamperDetector::compare(const BinaryMap& current,
                                                         const BinaryMap& delayed,
                                                         double alpha_edge) {
  Decision d;
  d.edge_count = current.count();
  d.changed = current.count_differences(delayed);
  // No fallback to the previous count for edge-free frames: there N_d equals
  // that count, so a ratio against it could never fire on full occlusion.
  d.fire = static_cast<double>(d.changed) > alpha_edge * static_cast<double>(d.edge_count);
  d.score = static_cast<double>(d.changed) / static_cast<double>(std::max<std::size_t>(d.edge_count, 1));
  return d;
}

std::optional<TamperEvent> EdgeTamperDetector::step(const Frame& frame) {
  BinaryMap edges = imgproc::edge_map(frame);
  std::optional<TamperEvent> event;
  if (previous_) {
    if (previous_->width != edges.width || previous_->height != edges.height) {
      throw DomainError("alg5: frame dimensions changed mid-stream");
    }
    const Decision d = compare(edges, *previous_, config_.alpha_edge);
    if (d.fire) event = make_event(TamperKind::Generic, frame, d.score);
  }
  previous_ = std::move(edges);
  return event;
}

// Pixel-position motion ----------------------------------------------------

PixelPositionMotionDetector::PixelPositionMotionDetector(DetectorConfig config)
    : Detector(std::move(config)), model_(config_.alpha_background) {}

std::optional<TamperEvent> PixelPositionMotionDetector::step(const Frame& frame) {
  std::optional<TamperEvent> event;
  if (model_.initialized()) {
    if (frame.width() != model_.mean().width || frame.height() != model_.mean().height) {
      throw DomainError("motion: frame dimensions changed mid-stream");
    }
    auto px = frame.luma();
    const auto& mean = model_.mean().data;
    std::size_t moved = 0;
    for (std::size_t i = 0; i < px.size(); ++i) moved += std::abs(px[i] - mean[i]) > config_.tau;
    const double total = static_cast<double>(px.size());
    if (static_cast<double>(moved) > config_.theta_b * total) {
      event = make_event(TamperKind::Motion, frame, static_cast<double>(moved) / total);
    }
  }
  model_.update(frame);
  return event;
}

// Combined -----------------------------------------------------------------

CombinedDetector::CombinedDetector(DetectorConfig config)
    : Detector(config), defocus_(std::move(config)) {}

std::optional<std::int64_t> CombinedDetector::reference_index() const {
  if (!reference_) return std::nullopt;
  return reference_->frame.index();
}

void CombinedDetector::reset_candidate() {
  candidate_.reset();
  candidate_frames_ = 0;
  candidate_score_sum_ = 0.0;
}

TamperKind CombinedDetector::classify(const FrameFeatures& current) const {
  const HistContourPhases p = hist_contour_phases(current, *reference_, config_);
  if (p.hist && p.contour) return TamperKind::Occlusion;
  const double q = static_cast<double>(defocus_.hf_count(current.frame));
  if (q < static_cast<double>(*base_hf_count_) * config_.beta_l) return TamperKind::Defocus;
  return TamperKind::Motion;
}

std::optional<TamperEvent> CombinedDetector::step(const Frame& frame) {
  if (unusable_) return std::nullopt;
  if (!reference_) {
    const std::size_t q = defocus_.hf_count(frame);
    if (q == 0) {
      unusable_ = true;
      throw ConfigError("combined: reference frame has no high-frequency content");
    }
    base_hf_count_ = q;
    reference_ = FrameFeatures::compute(frame);
    quiet_run_ = config_.persistence;
    return std::nullopt;
  }
  if (!frame.same_shape(reference_->frame)) {
    throw DomainError("combined: frame dimensions changed mid-stream");
  }

  FrameFeatures current = FrameFeatures::compute(frame);
  const auto gate = EdgeTamperDetector::compare(current.edges, reference_->edges, config_.alpha_edge);
  const bool cooling = cooldown_left_ > 0;
  if (cooling) --cooldown_left_;

  if (!gate.fire) {
    // A single quiet frame inside an unstable stretch (blur can swing the
    // Otsu cut and flood the edge map) must not become the reference.
    reset_candidate();
    if (++quiet_run_ >= config_.persistence) {
      latched_ = false;
      reference_ = std::move(current);
    }
    return std::nullopt;
  }
  quiet_run_ = 0;
  if (latched_ || cooling) {
    reset_candidate();
    return std::nullopt;
  }

  const TamperKind kind = classify(current);
  if (candidate_ != kind) {
    reset_candidate();
    candidate_ = kind;
  }
  ++candidate_frames_;
  candidate_score_sum_ += gate.score;
  if (candidate_frames_ < config_.persistence) return std::nullopt;

  TamperEvent event = make_event(kind, frame, candidate_score_sum_ / candidate_frames_);
  reset_candidate();
  latched_ = true;
  cooldown_left_ = config_.cooldown;
  return event;
}

// Factory ------------------------------------------------------------------

const std::vector<std::string>& detector_ids() {
  static const std::vector<std::string> ids = {"alg1", "alg2", "alg3", "alg4",
                                               "alg5", "motion", "combined"};
  return ids;
}

std::unique_ptr<Detector> make_detector(std::string_view id, const DetectorConfig& config) {
  if (id == "alg1") return std::make_unique<EntropyOcclusionDetector>(config);
  if (id == "alg2") return std::make_unique<HuangDetector>(config);
  if (id == "alg3") return std::make_unique<DctDefocusDetector>(config);
  if (id == "alg4") return std::make_unique<FftDefocusDetector>(config);
  if (id == "alg5") return std::make_unique<EdgeTamperDetector>(config);
  if (id == "motion") return std::make_unique<PixelPositionMotionDetector>(config);
  if (id == "combined") return std::make_unique<CombinedDetector>(config);
  throw ConfigError("unknown detector '" + std::string(id) + "'");
}

std::vector<TamperEvent> run_detector(std::string_view id, const DetectorConfig& config,
                                      const std::vector<Frame>& frames) {
  auto detector = make_detector(id, config);
  std::vector<TamperEvent> events;
  for (const auto& f : frames) {
    if (auto e = detector->step(f)) events.push_back(std::move(*e));
  }
  return events;
}

}  // namespace camtamper
