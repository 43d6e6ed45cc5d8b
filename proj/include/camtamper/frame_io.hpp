#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "camtamper/frame.hpp"

namespace camtamper {

/// Sequential single-consumer source of equally sized frames.
class FrameStream {
 public:
  virtual ~FrameStream() = default;

  /// Next frame, or nullopt at end of stream.
  virtual std::optional<Frame> next() = 0;

  int width() const { return width_; }
  int height() const { return height_; }
  const std::string& source() const { return source_; }
  /// Frame rate from the container, if it declares one. Informational only.
  std::optional<double> frame_rate() const { return frame_rate_; }

 protected:
  FrameStream(std::string source, int width, int height, std::optional<double> fps = std::nullopt)
      : source_(std::move(source)), width_(width), height_(height), frame_rate_(fps) {}

  std::string source_;
  int width_ = 0;
  int height_ = 0;
  std::optional<double> frame_rate_;
};

// Binary PGM (P5, maxval 255).
Frame decode_pgm(std::string_view bytes);
std::string encode_pgm(const Frame& frame);
Frame load_pgm(const std::filesystem::path& path);
void save_pgm(const std::filesystem::path& path, const Frame& frame);

/// Opens a YUV4MPEG2 file ("-" reads standard input). Only the luma plane is kept.
std::unique_ptr<FrameStream> open_y4m(const std::filesystem::path& path);
/// Parses a YUV4MPEG2 stream already opened by the caller.
std::unique_ptr<FrameStream> open_y4m(std::unique_ptr<std::istream> in, std::string source);

/// Writes frames as a 4:2:0 Y4M with neutral chroma (128).
std::string encode_y4m(const std::vector<Frame>& frames, std::string_view colorspace = "C420jpeg");

/// Directory of *.pgm files sorted lexicographically by file name.
std::unique_ptr<FrameStream> open_pgm_dir(const std::filesystem::path& dir);

/// In-memory stream; reindexes frames 0..n-1.
std::unique_ptr<FrameStream> make_memory_stream(std::vector<Frame> frames, std::string source = "memory");

/// Picks the reader by path: directory -> PGM sequence, "*.y4m" or "-" -> Y4M, "*.pgm" -> single frame.
std::unique_ptr<FrameStream> open_stream(const std::filesystem::path& path);

std::vector<Frame> read_all(FrameStream& stream);

/// Zero-padded sequence file name, e.g. frame_000042.pgm.
std::string sequence_file_name(std::int64_t index);

/// BT.601 luma: round(0.299 r + 0.587 g + 0.114 b).
std::uint8_t rgb_to_luma(int r, int g, int b);

}  // namespace camtamper
