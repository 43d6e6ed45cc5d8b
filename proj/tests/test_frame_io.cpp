#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "camtamper/errors.hpp"
#include "camtamper/frame_io.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace camtamper;

namespace {

std::string pgm_bytes(const std::string& header, std::size_t payload, char fill = 'x') {
  return header + std::string(payload, fill);
}

void write_file(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

}  // namespace

TEST_CASE("frame construction validates dimensions") {
  CHECK_THROWS_AS(Frame(0, 4, {}), DomainError);
  CHECK_THROWS_AS(Frame(2, 2, std::vector<std::uint8_t>(3)), DomainError);
  const Frame f = Frame::filled(3, 2, 9, 5);
  CHECK(f.size() == 6);
  CHECK(f.index() == 5);
  CHECK(f.at(2, 1) == 9);
  CHECK(same_pixels(f, f.with_index(0)));
  CHECK_FALSE(f == f.with_index(0));
}

TEST_CASE("pgm encode then decode is identity") {
  std::mt19937_64 rng(11);
  for (auto [w, h] : {std::pair{1, 1}, std::pair{7, 3}, std::pair{64, 48}}) {
    const Frame f = oracle::random_frame(rng, w, h);
    const Frame back = decode_pgm(encode_pgm(f));
    CHECK(back.width() == w);
    CHECK(back.height() == h);
    CHECK(same_pixels(back, f));
  }
}

TEST_CASE("pgm header comments and whitespace") {
  const std::string bytes = pgm_bytes("P5\n# made by hand\n2 # width\n2\n255\n", 4, 'A');
  const Frame f = decode_pgm(bytes);
  CHECK(f.width() == 2);
  CHECK(f.at(1, 1) == 'A');
}

TEST_CASE("pgm errors map to the right exception") {
  CHECK_THROWS_AS(decode_pgm("P2\n2 2\n255\n1 2 3 4"), FormatError);
  CHECK_THROWS_AS(decode_pgm(pgm_bytes("P5\n2 2\n65535\n", 8)), UnsupportedError);
  CHECK_THROWS_AS(decode_pgm(pgm_bytes("P5\n2 2\n255\n", 3)), IoError);
  CHECK_THROWS_AS(decode_pgm("P5\n0 2\n255\n"), FormatError);
  CHECK_THROWS_AS(load_pgm("/nonexistent/frame.pgm"), IoError);
}

TEST_CASE("y4m round trip keeps luma and drops chroma") {
  std::mt19937_64 rng(12);
  std::vector<Frame> frames;
  for (int i = 0; i < 4; ++i) frames.push_back(oracle::random_frame(rng, 9, 5));
  for (const char* cs : {"C420jpeg", "C420", "C420paldv", "Cmono"}) {
    auto in = std::make_unique<std::istringstream>(encode_y4m(frames, cs));
    auto stream = open_y4m(std::move(in), "mem");
    CHECK(stream->width() == 9);
    CHECK(stream->height() == 5);
    CHECK(stream->frame_rate().value() == doctest::Approx(25.0));
    const auto back = read_all(*stream);
    REQUIRE(back.size() == frames.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(same_pixels(back[i], frames[i]));
      CHECK(back[i].index() == static_cast<std::int64_t>(i));
    }
  }
}

TEST_CASE("y4m rejects unsupported and malformed input") {
  auto open = [](const std::string& text) {
    return open_y4m(std::make_unique<std::istringstream>(text), "mem");
  };
  CHECK_THROWS_AS(open("YUV4MPEG2 W4 H4 F25:1 C444\n"), UnsupportedError);
  CHECK_THROWS_AS(open("MPEG W4 H4\n"), FormatError);
  CHECK_THROWS_AS(open("YUV4MPEG2 F25:1\n"), FormatError);
  auto truncated = open("YUV4MPEG2 W4 H4 Cmono\nFRAME\nabc");
  CHECK_THROWS_AS(truncated->next(), IoError);
}

TEST_CASE("streams never change dimensions mid-stream") {
  TempDir dir("dims");
  save_pgm(dir / "frame_000000.pgm", Frame::filled(4, 4, 1));
  save_pgm(dir / "frame_000001.pgm", Frame::filled(5, 4, 1));
  auto stream = open_pgm_dir(dir.path());
  CHECK(stream->next().has_value());
  CHECK_THROWS_AS(stream->next(), FormatError);
}

TEST_CASE("pgm directory is read in lexicographic order with fresh indices") {
  TempDir dir("order");
  save_pgm(dir / "frame_000010.pgm", Frame::filled(3, 3, 30));
  save_pgm(dir / "frame_000002.pgm", Frame::filled(3, 3, 20));
  save_pgm(dir / "frame_000001.pgm", Frame::filled(3, 3, 10));
  write_file(dir / "notes.txt", "ignored");
  auto stream = open_stream(dir.path());
  const auto frames = read_all(*stream);
  REQUIRE(frames.size() == 3);
  CHECK(frames[0].at(0, 0) == 10);
  CHECK(frames[1].at(0, 0) == 20);
  CHECK(frames[2].at(0, 0) == 30);
  CHECK(frames[2].index() == 2);
}

TEST_CASE("open_stream dispatch and errors") {
  TempDir dir("dispatch");
  CHECK_THROWS_AS(open_stream(dir / "missing"), IoError);
  CHECK_THROWS_AS(open_pgm_dir(dir.path()), IoError);  // empty
  save_pgm(dir / "single.pgm", Frame::filled(2, 2, 5));
  CHECK(read_all(*open_stream(dir / "single.pgm")).size() == 1);
  write_file(dir / "clip.y4m", encode_y4m({Frame::filled(2, 2, 5), Frame::filled(2, 2, 6)}));
  CHECK(read_all(*open_stream(dir / "clip.y4m")).size() == 2);
  write_file(dir / "clip.avi", "RIFF");
  CHECK_THROWS_AS(open_stream(dir / "clip.avi"), UnsupportedError);
}

TEST_CASE("sequence file names are zero padded") {
  CHECK(sequence_file_name(0) == "frame_000000.pgm");
  CHECK(sequence_file_name(299) == "frame_000299.pgm");
  CHECK(sequence_file_name(1234567) == "frame_1234567.pgm");
}

TEST_CASE("rgb_to_luma: gray fixed points and monotonicity") {
  for (int v = 0; v < 256; ++v) CHECK(rgb_to_luma(v, v, v) == v);
  CHECK(rgb_to_luma(255, 0, 0) == 76);
  CHECK(rgb_to_luma(0, 255, 0) == 150);
  CHECK(rgb_to_luma(0, 0, 255) == 29);
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(0, 254);
  for (int i = 0; i < 2000; ++i) {
    const int r = d(rng), g = d(rng), b = d(rng);
    const int base = rgb_to_luma(r, g, b);
    CHECK(rgb_to_luma(r + 1, g, b) >= base);
    CHECK(rgb_to_luma(r, g + 1, b) >= base);
    CHECK(rgb_to_luma(r, g, b + 1) >= base);
  }
}

TEST_CASE("memory stream reports its shape") {
  auto s = make_memory_stream({Frame::filled(4, 3, 0), Frame::filled(4, 3, 1)});
  CHECK(s->width() == 4);
  CHECK(s->height() == 3);
  CHECK_THROWS_AS(make_memory_stream({Frame::filled(4, 3, 0), Frame::filled(3, 3, 1)}), DomainError);
}
