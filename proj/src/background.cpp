#include "camtamper/background.hpp"

#include <cmath>
#include <cstdlib>

#include "camtamper/errors.hpp"

namespace camtamper {

DiffResult frame_diff(const Frame& current, const Frame& delayed, double tau) {
  if (!current.same_shape(delayed)) throw DomainError("frame_diff: frames differ in dimensions");
  if (!(tau >= 0.0 && tau <= 255.0)) throw DomainError("frame_diff: tau must lie in [0, 255]");
  DiffResult r;
  r.mask = BinaryMap(current.width(), current.height());
  auto a = current.luma();
  auto b = delayed.luma();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool changed = std::abs(static_cast<int>(a[i]) - static_cast<int>(b[i])) > tau;
    r.mask.data[i] = changed;
    r.changed_count += changed;
  }
  r.changed_fraction = static_cast<double>(r.changed_count) / static_cast<double>(a.size());
  return r;
}

BackgroundModel::BackgroundModel(double alpha, double initial_variance)
    : alpha_(alpha), initial_variance_(initial_variance) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("background alpha must lie in [0, 1]");
  if (!(initial_variance >= 0.0)) throw ConfigError("initial variance must be non-negative");
}

void BackgroundModel::check_shape(const Frame& frame) const {
  if (frame.width() != mean_.width || frame.height() != mean_.height) {
    throw DomainError("background model: frame dimensions differ from the stream");
  }
}

void BackgroundModel::update(const Frame& frame) {
  auto px = frame.luma();
  if (!initialized_) {
    mean_ = RealGrid(frame.width(), frame.height());
    variance_ = RealGrid(frame.width(), frame.height(), initial_variance_);
    for (std::size_t i = 0; i < px.size(); ++i) mean_.data[i] = px[i];
    initialized_ = true;
    return;
  }
  check_shape(frame);
  const double keep = alpha_;
  const double learn = 1.0 - alpha_;
  for (std::size_t i = 0; i < px.size(); ++i) {
    const double intensity = px[i];
    const double f = keep * mean_.data[i] + learn * intensity;
    const double d = f - intensity;
    mean_.data[i] = f;
    variance_.data[i] = keep * variance_.data[i] + learn * d * d;
  }
}

ForegroundMasks BackgroundModel::foreground_mask(const Frame& frame) const {
  if (!initialized_) throw StateError("foreground_mask on an uninitialized background model");
  check_shape(frame);
  ForegroundMasks m;
  m.background_match = BinaryMap(frame.width(), frame.height());
  auto px = frame.luma();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const double dev = std::abs(px[i] - mean_.data[i]);
    m.background_match.data[i] = dev < kMatchSigmas * std::sqrt(variance_.data[i]);
  }
  m.foreground = m.background_match.complement();
  return m;
}

}  // namespace camtamper
