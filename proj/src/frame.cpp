#include "camtamper/frame.hpp"

#include <algorithm>
#include <string>

#include "camtamper/errors.hpp"

namespace camtamper {

Frame::Frame(int width, int height, std::vector<std::uint8_t> luma, std::int64_t index)
    : width_(width), height_(height), index_(index), luma_(std::move(luma)) {
  if (width < 1 || height < 1) {
    throw DomainError("frame dimensions must be positive, got " + std::to_string(width) + "x" +
                      std::to_string(height));
  }
  if (index < 0) throw DomainError("frame index must be non-negative");
  if (luma_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw DomainError("luma length " + std::to_string(luma_.size()) + " does not match " +
                      std::to_string(width) + "x" + std::to_string(height));
  }
}

Frame Frame::filled(int width, int height, std::uint8_t value, std::int64_t index) {
  if (width < 1 || height < 1) throw DomainError("frame dimensions must be positive");
  return Frame(width, height,
               std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, value), index);
}

Frame Frame::with_index(std::int64_t index) const {
  Frame copy = *this;
  if (index < 0) throw DomainError("frame index must be non-negative");
  copy.index_ = index;
  return copy;
}

bool same_pixels(const Frame& a, const Frame& b) {
  return a.same_shape(b) && std::ranges::equal(a.luma(), b.luma());
}

std::size_t BinaryMap::count() const {
  return static_cast<std::size_t>(std::count(data.begin(), data.end(), std::uint8_t{1}));
}

std::size_t BinaryMap::count_differences(const BinaryMap& other) const {
  if (width != other.width || height != other.height) {
    throw DomainError("binary maps differ in shape");
  }
  std::size_t n = 0;
  for (std::size_t i = 0; i < data.size(); ++i) n += (data[i] != other.data[i]);
  return n;
}

BinaryMap BinaryMap::complement() const {
  BinaryMap out(width, height);
  for (std::size_t i = 0; i < data.size(); ++i) out.data[i] = data[i] ? 0 : 1;
  return out;
}

}  // namespace camtamper
