#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "camtamper/background.hpp"
#include "camtamper/frame.hpp"
#include "camtamper/imgproc.hpp"

namespace camtamper {

enum class TamperKind { Occlusion, Defocus, Motion, Generic };

std::string_view to_string(TamperKind kind);
/// Parses "occlusion", "defocus", "motion" or "generic". Throws ValidationError otherwise.
TamperKind parse_tamper_kind(std::string_view name);

struct TamperEvent {
  TamperKind kind = TamperKind::Generic;
  std::int64_t frame_index = 0;
  double score = 0.0;
  std::string detector_id;

  friend bool operator==(const TamperEvent&, const TamperEvent&) = default;
};

/// Tunables shared by all detectors. Field names in set()/JSON follow the
/// short names listed in field_names().
struct DetectorConfig {
  double alpha_entropy = 0.5;      // entropy ratio threshold
  double tau = 25.0;               // frame-difference intensity threshold
  double theta_b = 0.6;            // changed-fraction gate
  int n_hist = 10;                 // histogram half-window around the peak
  double theta_obstruction = 2.0;  // histogram window growth factor
  double theta_contour = 0.5;      // edge count decay factor
  double beta_l = 0.70;            // fraction of the base high-frequency count
  double eps_dct = 1.0;            // |C| threshold, orthonormal DCT units
  double eps_fft = 1.0;            // |F| threshold, orthonormal (unitary) DFT units
  double alpha_edge = 1.3;         // edge-change factor
  int persistence = 5;             // combined: consecutive gated frames before emission
  int cooldown = 30;               // combined: frames suppressed after emission
  double alpha_background = BackgroundModel::kDefaultAlpha;  // pixel-position motion model

  /// Throws ConfigError naming the first out-of-range field.
  void validate() const;
  /// Sets one field by name from its decimal text. Throws ConfigError on an unknown name or bad value.
  void set(std::string_view name, std::string_view value);
  /// Numeric form; integer fields reject non-integral values.
  void set_value(std::string_view name, double value);
  double get(std::string_view name) const;
  static const std::vector<std::string>& field_names();

  std::string to_json() const;
  /// Overrides from a JSON object; unspecified fields keep their defaults.
  static DetectorConfig from_json(std::string_view text);

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

class Detector {
 public:
  virtual ~Detector() = default;

  virtual std::string_view id() const = 0;
  /// Consumes the next frame of the stream.
  virtual std::optional<TamperEvent> step(const Frame& frame) = 0;

  const DetectorConfig& config() const { return config_; }

 protected:
  explicit Detector(DetectorConfig config);

  TamperEvent make_event(TamperKind kind, const Frame& frame, double score) const;

  DetectorConfig config_;
};

/// Entropy-ratio occlusion test: emits Occlusion when E_n / E_{n-1} < alpha_entropy.
/// Score is the ratio. A previous entropy below 1e-9 counts as ratio 1.
class EntropyOcclusionDetector final : public Detector {
 public:
  static constexpr double kMinPreviousEntropy = 1e-9;
  explicit EntropyOcclusionDetector(DetectorConfig config);
  std::string_view id() const override { return "alg1"; }
  std::optional<TamperEvent> step(const Frame& frame) override;

 private:
  std::optional<double> previous_entropy_;
};

/// Per-frame features reused by the histogram/contour phases.
struct FrameFeatures {
  Frame frame;
  imgproc::Histogram hist;
  BinaryMap edges;
  std::size_t edge_count = 0;

  static FrameFeatures compute(const Frame& frame);
};

/// Outcome of the histogram and contour phases between a current and a delayed frame.
struct HistContourPhases {
  int peak = 0;                       // f_0, peak bin of the current histogram
  std::uint64_t current_window = 0;   // window sum around f_0 in the current histogram
  std::uint64_t delayed_window = 0;   // same window in the delayed histogram
  bool hist = false;                  // current_window >= delayed_window * theta_obstruction
  bool contour = false;               // edges_now <= edges_before * theta_contour

  double window_ratio() const;
};

HistContourPhases hist_contour_phases(const FrameFeatures& current, const FrameFeatures& delayed,
                                      const DetectorConfig& config);

/// Three-phase occlusion/motion detector against the previous frame:
/// frame-difference gate, histogram peak window, contour decay.
/// gate && hist && contour -> Occlusion (score: window ratio);
/// gate && !hist && !contour -> Motion (score: changed fraction).
class HuangDetector final : public Detector {
 public:
  explicit HuangDetector(DetectorConfig config);
  std::string_view id() const override { return "alg2"; }
  std::optional<TamperEvent> step(const Frame& frame) override;

 private:
  std::optional<FrameFeatures> previous_;
};

/// Defocus by loss of high-frequency coefficients relative to the first frame.
/// Emits Defocus with score Q_t / Q_base when Q_t < Q_base * beta_l.
class HfDefocusDetector : public Detector {
 public:
  std::optional<TamperEvent> step(const Frame& frame) override;

  std::optional<std::size_t> base_count() const { return base_count_; }
  std::optional<std::size_t> last_count() const { return last_count_; }
  /// High-frequency coefficient count of one frame.
  virtual std::size_t hf_count(const Frame& frame) const = 0;

 protected:
  using Detector::Detector;

 private:
  std::optional<std::size_t> base_count_;
  std::optional<std::size_t> last_count_;
  bool unusable_ = false;
};

/// DCT variant: counts |C| > eps_dct in the bottom-right quadrant.
class DctDefocusDetector final : public HfDefocusDetector {
 public:
  explicit DctDefocusDetector(DetectorConfig config);
  std::string_view id() const override { return "alg3"; }
  std::size_t hf_count(const Frame& frame) const override;
};

/// FFT variant: counts coefficients outside the central rectangle. eps_fft is
/// given in unitary-DFT units and divided by sqrt(W*H) to match the
/// 1/(W*H)-normalized forward transform.
class FftDefocusDetector final : public HfDefocusDetector {
 public:
  explicit FftDefocusDetector(DetectorConfig config);
  std::string_view id() const override { return "alg4"; }
  std::size_t hf_count(const Frame& frame) const override;
};

/// Edge-map change detector: N_d (disagreeing edge pixels vs the previous
/// frame) against alpha_edge * N, N being the current edge count. Emits
/// Generic, score N_d / max(N, 1).
class EdgeTamperDetector final : public Detector {
 public:
  explicit EdgeTamperDetector(DetectorConfig config);
  std::string_view id() const override { return "alg5"; }
  std::optional<TamperEvent> step(const Frame& frame) override;

  struct Decision {
    std::size_t edge_count = 0;   // N
    std::size_t changed = 0;      // N_d
    bool fire = false;
    double score = 0.0;
  };
  /// The comparison itself, shared with the combined pipeline.
  static Decision compare(const BinaryMap& current, const BinaryMap& delayed, double alpha_edge);

 private:
  std::optional<BinaryMap> previous_;
};

/// Camera-motion test against the running background: counts pixels with
/// |I - F| > tau and emits Motion (score count / N_T) above theta_b * N_T.
class PixelPositionMotionDetector final : public Detector {
 public:
  explicit PixelPositionMotionDetector(DetectorConfig config);
  std::string_view id() const override { return "motion"; }
  std::optional<TamperEvent> step(const Frame& frame) override;

  const BackgroundModel& model() const { return model_; }

 private:
  BackgroundModel model_;
};

/// Fusion of the edge-change gate with histogram/contour and DCT classification.
///
/// The gate compares each frame's edge map with a reference frame. The
/// reference follows the stream once the gate has been quiet for `persistence`
/// consecutive frames and is held otherwise, so a sustained tamper keeps firing
/// until the view returns. Each gated
/// frame is classified: histogram and contour conditions -> Occlusion, else DCT
/// high-frequency loss -> Defocus, else Motion. A kind must repeat for
/// `persistence` consecutive gated frames before one event is emitted (score:
/// mean gate score over those frames). After an emission the detector stays
/// silent until the gate is quiet for `persistence` frames, and for at least
/// `cooldown` frames.
class CombinedDetector final : public Detector {
 public:
  explicit CombinedDetector(DetectorConfig config);
  std::string_view id() const override { return "combined"; }
  std::optional<TamperEvent> step(const Frame& frame) override;

  bool latched() const { return latched_; }
  std::optional<std::int64_t> reference_index() const;

 private:
  TamperKind classify(const FrameFeatures& current) const;
  void reset_candidate();

  DctDefocusDetector defocus_;  // used for its hf_count only
  std::optional<std::size_t> base_hf_count_;
  std::optional<FrameFeatures> reference_;
  std::optional<TamperKind> candidate_;
  int candidate_frames_ = 0;
  double candidate_score_sum_ = 0.0;
  bool latched_ = false;
  bool unusable_ = false;
  int cooldown_left_ = 0;
  int quiet_run_ = 0;  // consecutive frames the gate stayed quiet
};

/// Known detector ids: alg1..alg5, motion, combined.
const std::vector<std::string>& detector_ids();
std::unique_ptr<Detector> make_detector(std::string_view id, const DetectorConfig& config);

/// Runs one fresh detector over a frame sequence.
std::vector<TamperEvent> run_detector(std::string_view id, const DetectorConfig& config,
                                      const std::vector<Frame>& frames);

}  // namespace camtamper
