#pragma once

#include <cstddef>

#include "camtamper/frame.hpp"

namespace camtamper {

struct DiffResult {
  BinaryMap mask;
  std::size_t changed_count = 0;
  double changed_fraction = 0.0;
};

/// Marks pixels with |current - delayed| > tau.
DiffResult frame_diff(const Frame& current, const Frame& delayed, double tau);

/// Pixels matching the background model, and their complement.
struct ForegroundMasks {
  BinaryMap background_match;  // 1 where |I - F| < 2.5 sqrt(v)
  BinaryMap foreground;        // NOT background_match
};

/// Running single-Gaussian background:
///   F_t = a F_{t-1} + (1 - a) I_t
///   v_t = a v_{t-1} + (1 - a) (F_t - I_t)^2
/// The first frame seeds F = I and v = initial_variance.
class BackgroundModel {
 public:
  static constexpr double kDefaultAlpha = 0.95;
  static constexpr double kDefaultInitialVariance = 100.0;
  static constexpr double kMatchSigmas = 2.5;

  explicit BackgroundModel(double alpha = kDefaultAlpha,
                           double initial_variance = kDefaultInitialVariance);

  void update(const Frame& frame);
  ForegroundMasks foreground_mask(const Frame& frame) const;

  bool initialized() const { return initialized_; }
  double alpha() const { return alpha_; }
  const RealGrid& mean() const { return mean_; }
  const RealGrid& variance() const { return variance_; }

 private:
  void check_shape(const Frame& frame) const;

  double alpha_;
  double initial_variance_;
  bool initialized_ = false;
  RealGrid mean_;
  RealGrid variance_;
};

}  // namespace camtamper
