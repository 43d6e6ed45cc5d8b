#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace camtamper {

/// One 8-bit grayscale video frame, row-major.
class Frame {
 public:
  Frame() = default;
  Frame(int width, int height, std::vector<std::uint8_t> luma, std::int64_t index = 0);

  static Frame filled(int width, int height, std::uint8_t value, std::int64_t index = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::int64_t index() const { return index_; }
  std::size_t size() const { return luma_.size(); }
  bool empty() const { return luma_.empty(); }

  std::span<const std::uint8_t> luma() const { return luma_; }
  std::uint8_t at(int x, int y) const {
    return luma_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                 static_cast<std::size_t>(x)];
  }

  /// Copy with a different stream ordinal.
  Frame with_index(std::int64_t index) const;

  bool same_shape(const Frame& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::int64_t index_ = 0;
  std::vector<std::uint8_t> luma_;
};

/// Pixel-wise equality, ignoring the frame index.
bool same_pixels(const Frame& a, const Frame& b);

/// Row-major grid of arbitrary cell type.
template <class T>
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Grid() = default;
  Grid(int w, int h, T init = T{})
      : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), init) {}

  std::size_t size() const { return data.size(); }
  T& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  const T& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

  friend bool operator==(const Grid&, const Grid&) = default;
};

using RealGrid = Grid<double>;

/// Boolean mask stored one byte per pixel (0 or 1).
struct BinaryMap : Grid<std::uint8_t> {
  using Grid<std::uint8_t>::Grid;

  std::size_t count() const;
  /// Number of positions where the two maps differ; shapes must match.
  std::size_t count_differences(const BinaryMap& other) const;
  BinaryMap complement() const;
};

}  // namespace camtamper
