#include "camtamper/frame_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "camtamper/errors.hpp"

namespace camtamper {
namespace fs = std::filesystem;

namespace {

class PgmHeaderReader {
 public:
  explicit PgmHeaderReader(std::string_view bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* what) {
    skip_space_and_comments();
    std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) throw FormatError(std::string("PGM ") + what + " too large");
      ++pos_;
    }
    if (pos_ == start) throw FormatError(std::string("PGM header: missing ") + what);
    return value;
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }
  bool at_space() const {
    return pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_]));
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return std::move(ss).str();
}

class Y4mStream final : public FrameStream {
 public:
  Y4mStream(std::unique_ptr<std::istream> in, std::string source, int w, int h, bool mono,
            std::optional<double> fps)
      : FrameStream(std::move(source), w, h, fps), in_(std::move(in)) {
    const std::size_t cw = (static_cast<std::size_t>(w) + 1) / 2;
    const std::size_t ch = (static_cast<std::size_t>(h) + 1) / 2;
    chroma_bytes_ = mono ? 0 : 2 * cw * ch;
  }

  std::optional<Frame> next() override {
    std::string line;
    if (!std::getline(*in_, line)) {
      if (in_->eof() && line.empty()) return std::nullopt;
      throw IoError(source_ + ": read failed");
    }
    if (line.rfind("FRAME", 0) != 0) {
      throw FormatError(source_ + ": expected FRAME marker, got '" + line.substr(0, 16) + "'");
    }
    std::vector<std::uint8_t> luma(static_cast<std::size_t>(width_) * height_);
    in_->read(reinterpret_cast<char*>(luma.data()), static_cast<std::streamsize>(luma.size()));
    if (static_cast<std::size_t>(in_->gcount()) != luma.size()) {
      throw IoError(source_ + ": truncated luma plane in frame " + std::to_string(next_index_));
    }
    if (chroma_bytes_ > 0) {
      in_->ignore(static_cast<std::streamsize>(chroma_bytes_));
      if (static_cast<std::size_t>(in_->gcount()) != chroma_bytes_) {
        throw IoError(source_ + ": truncated chroma planes in frame " + std::to_string(next_index_));
      }
    }
    return Frame(width_, height_, std::move(luma), next_index_++);
  }

 private:
  std::unique_ptr<std::istream> in_;
  std::size_t chroma_bytes_ = 0;
  std::int64_t next_index_ = 0;
};

class PgmDirStream final : public FrameStream {
 public:
  PgmDirStream(std::string source, std::vector<fs::path> files, Frame first)
      : FrameStream(std::move(source), first.width(), first.height()),
        files_(std::move(files)),
        pending_(std::move(first)) {}

  std::optional<Frame> next() override {
    if (cursor_ >= files_.size()) return std::nullopt;
    Frame f = cursor_ == 0 ? std::move(*pending_) : load_pgm(files_[cursor_]);
    pending_.reset();
    if (f.width() != width_ || f.height() != height_) {
      throw FormatError(files_[cursor_].string() + ": dimensions differ from the first frame");
    }
    return f.with_index(static_cast<std::int64_t>(cursor_++));
  }

 private:
  std::vector<fs::path> files_;
  std::optional<Frame> pending_;
  std::size_t cursor_ = 0;
};

class MemoryStream final : public FrameStream {
 public:
  MemoryStream(std::vector<Frame> frames, std::string source)
      : FrameStream(std::move(source), frames.empty() ? 0 : frames.front().width(),
                    frames.empty() ? 0 : frames.front().height()),
        frames_(std::move(frames)) {
    for (const auto& f : frames_) {
      if (f.width() != width_ || f.height() != height_) {
        throw DomainError("memory stream frames differ in dimensions");
      }
    }
  }

  std::optional<Frame> next() override {
    if (cursor_ >= frames_.size()) return std::nullopt;
    auto i = cursor_++;
    return frames_[i].with_index(static_cast<std::int64_t>(i));
  }

 private:
  std::vector<Frame> frames_;
  std::size_t cursor_ = 0;
};

bool has_extension(const fs::path& p, std::string_view ext) {
  auto e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e == ext;
}

}  // namespace

Frame decode_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw FormatError("not a binary PGM (missing P5 magic)");
  }
  PgmHeaderReader r(bytes.substr(2));
  if (!r.at_space()) throw FormatError("PGM header: expected whitespace after magic");
  long w = r.read_uint("width");
  long h = r.read_uint("height");
  long maxval = r.read_uint("maxval");
  if (w < 1 || h < 1) throw FormatError("PGM header: zero dimension");
  if (maxval < 1 || maxval > 65535) throw FormatError("PGM header: invalid maxval");
  if (maxval != 255) throw UnsupportedError("PGM maxval " + std::to_string(maxval) + " (only 255)");
  if (!r.at_space()) throw FormatError("PGM header: expected single whitespace before payload");
  r.advance();
  std::size_t offset = 2 + r.pos();
  std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() - offset < need) {
    throw IoError("PGM payload truncated: need " + std::to_string(need) + " bytes, have " +
                  std::to_string(bytes.size() - offset));
  }
  auto payload = bytes.substr(offset, need);
  return Frame(static_cast<int>(w), static_cast<int>(h),
               std::vector<std::uint8_t>(payload.begin(), payload.end()));
}

std::string encode_pgm(const Frame& frame) {
  std::string out = "P5\n" + std::to_string(frame.width()) + " " + std::to_string(frame.height()) +
                    "\n255\n";
  auto luma = frame.luma();
  out.append(reinterpret_cast<const char*>(luma.data()), luma.size());
  return out;
}

Frame load_pgm(const fs::path& path) {
  try {
    return decode_pgm(read_file(path));
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    // Keep the error category, add the file name.
    if (dynamic_cast<const UnsupportedError*>(&e)) throw UnsupportedError(path.string() + ": " + e.what());
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_pgm(const fs::path& path, const Frame& frame) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  auto bytes = encode_pgm(frame);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::unique_ptr<FrameStream> open_y4m(std::unique_ptr<std::istream> in, std::string source) {
  std::string header;
  if (!in || !std::getline(*in, header)) throw IoError(source + ": cannot read Y4M header");
  std::istringstream tokens(header);
  std::string magic;
  tokens >> magic;
  if (magic != "YUV4MPEG2") throw FormatError(source + ": missing YUV4MPEG2 signature");

  long w = -1, h = -1;
  bool mono = false;
  std::optional<double> fps;
  std::string tok;
  while (tokens >> tok) {
    char tag = tok[0];
    std::string val = tok.substr(1);
    try {
      switch (tag) {
        case 'W': w = std::stol(val); break;
        case 'H': h = std::stol(val); break;
        case 'F': {
          auto colon = val.find(':');
          if (colon == std::string::npos) throw FormatError(source + ": bad frame rate " + val);
          double num = std::stod(val.substr(0, colon));
          double den = std::stod(val.substr(colon + 1));
          if (den > 0) fps = num / den;
          break;
        }
        case 'C':
          if (val == "420" || val == "420jpeg" || val == "420paldv" || val == "420mpeg2") {
            mono = false;
          } else if (val == "mono") {
            mono = true;
          } else {
            throw UnsupportedError(source + ": unsupported Y4M colorspace C" + val);
          }
          break;
        default: break;  // I, A, X: informational
      }
    } catch (const std::invalid_argument&) {
      throw FormatError(source + ": malformed header token " + tok);
    } catch (const std::out_of_range&) {
      throw FormatError(source + ": header value out of range " + tok);
    }
  }
  if (w < 1 || h < 1 || w > 1'000'000 || h > 1'000'000) {
    throw FormatError(source + ": missing or invalid W/H in Y4M header");
  }
  return std::make_unique<Y4mStream>(std::move(in), std::move(source), static_cast<int>(w),
                                     static_cast<int>(h), mono, fps);
}

std::unique_ptr<FrameStream> open_y4m(const fs::path& path) {
  if (path == "-") {
    // Non-owning wrapper around std::cin.
    auto in = std::make_unique<std::istream>(std::cin.rdbuf());
    return open_y4m(std::move(in), "<stdin>");
  }
  auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*in) throw IoError("cannot open " + path.string());
  return open_y4m(std::move(in), path.string());
}

std::string encode_y4m(const std::vector<Frame>& frames, std::string_view colorspace) {
  if (frames.empty()) throw DomainError("encode_y4m needs at least one frame");
  const int w = frames.front().width();
  const int h = frames.front().height();
  const bool mono = colorspace == "Cmono";
  std::string out = "YUV4MPEG2 W" + std::to_string(w) + " H" + std::to_string(h) +
                    " F25:1 Ip A1:1 " + std::string(colorspace) + "\n";
  const std::size_t chroma = mono ? 0 : 2 * ((w + 1) / 2) * static_cast<std::size_t>((h + 1) / 2);
  for (const auto& f : frames) {
    if (f.width() != w || f.height() != h) throw DomainError("encode_y4m: mixed frame sizes");
    out += "FRAME\n";
    auto luma = f.luma();
    out.append(reinterpret_cast<const char*>(luma.data()), luma.size());
    out.append(chroma, static_cast<char>(128));
  }
  return out;
}

std::unique_ptr<FrameStream> open_pgm_dir(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && has_extension(entry.path(), ".pgm")) files.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
  if (files.empty()) throw IoError("no .pgm files in " + dir.string());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  Frame first = load_pgm(files.front());
  return std::make_unique<PgmDirStream>(dir.string(), std::move(files), std::move(first));
}

std::unique_ptr<FrameStream> make_memory_stream(std::vector<Frame> frames, std::string source) {
  return std::make_unique<MemoryStream>(std::move(frames), std::move(source));
}

std::unique_ptr<FrameStream> open_stream(const fs::path& path) {
  if (path == "-" || has_extension(path, ".y4m")) return open_y4m(path);
  std::error_code ec;
  if (fs::is_directory(path, ec)) return open_pgm_dir(path);
  if (has_extension(path, ".pgm")) {
    std::vector<Frame> one{load_pgm(path)};
    return make_memory_stream(std::move(one), path.string());
  }
  if (!fs::exists(path, ec)) throw IoError("no such input: " + path.string());
  throw UnsupportedError("unrecognized input type: " + path.string());
}

std::vector<Frame> read_all(FrameStream& stream) {
  std::vector<Frame> frames;
  while (auto f = stream.next()) frames.push_back(std::move(*f));
  return frames;
}

std::string sequence_file_name(std::int64_t index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
  return "frame_" + digits + ".pgm";
}

std::uint8_t rgb_to_luma(int r, int g, int b) {
  r = std::clamp(r, 0, 255);
  g = std::clamp(g, 0, 255);
  b = std::clamp(b, 0, 255);
  // Exact round-half-up of 0.299 r + 0.587 g + 0.114 b in integer arithmetic.
  int y = (299 * r + 587 * g + 114 * b + 500) / 1000;
  return static_cast<std::uint8_t>(std::clamp(y, 0, 255));
}

}  // namespace camtamper
