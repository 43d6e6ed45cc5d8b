#include "camtamper/selftest.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>

#include "camtamper/detectors.hpp"
#include "camtamper/imgproc.hpp"
#include "camtamper/synth.hpp"

namespace camtamper {

namespace {

using imgproc::ComplexGrid;

Frame random_frame(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> px(0, 255);
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h);
  for (auto& v : data) v = static_cast<std::uint8_t>(px(rng));
  return Frame(w, h, std::move(data));
}

double energy(const Frame& f) {
  double s = 0.0;
  for (auto v : f.luma()) s += double(v) * v;
  return s;
}

std::string sci(const char* label, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%.3e", label, v);
  return buf;
}

CheckResult check(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok, std::move(detail)};
}

CheckResult check_fft_naive(std::mt19937_64& rng) {
  const int n = 8;
  const Frame f = random_frame(rng, n, n);
  const ComplexGrid spec = imgproc::fft2(f);
  double worst = 0.0;
  for (int v = 0; v < n; ++v) {
    for (int u = 0; u < n; ++u) {
      std::complex<double> acc = 0.0;
      for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
          const double ang = -2.0 * std::numbers::pi * (double(u) * x / n + double(v) * y / n);
          acc += double(f.at(x, y)) * std::polar(1.0, ang);
        }
      }
      acc /= double(n * n);
      worst = std::max(worst, std::abs(acc - spec.at(u, v)));
    }
  }
  return check("fft_naive_dft", worst < 1e-9, sci("max_abs", worst));
}

CheckResult check_dct_round_trip(std::mt19937_64& rng) {
  double worst = 0.0;
  for (auto [w, h] : {std::pair{8, 8}, std::pair{37, 23}, std::pair{64, 48}}) {
    const Frame f = random_frame(rng, w, h);
    const RealGrid back = imgproc::idct2(imgproc::dct2(f));
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) worst = std::max(worst, std::abs(back.at(x, y) - f.at(x, y)));
    }
  }
  return check("dct_round_trip", worst < 1e-9, sci("max_abs", worst));
}

CheckResult check_dct_parseval(std::mt19937_64& rng) {
  double worst = 0.0;
  for (auto [w, h] : {std::pair{16, 16}, std::pair{45, 31}, std::pair{128, 96}}) {
    const Frame f = random_frame(rng, w, h);
    const RealGrid c = imgproc::dct2(f);
    double e = 0.0;
    for (double v : c.data) e += v * v;
    const double ref = energy(f);
    worst = std::max(worst, std::abs(e - ref) / ref);
  }
  return check("dct_parseval", worst < 1e-9, sci("rel_err", worst));
}

CheckResult check_fft_round_trip(std::mt19937_64& rng) {
  const Frame f = random_frame(rng, 30, 20);
  const ComplexGrid back = imgproc::ifft2(imgproc::fft2(f));
  double worst = 0.0;
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      worst = std::max(worst, std::abs(back.at(x, y) - std::complex<double>(f.at(x, y))));
    }
  }
  return check("fft_round_trip", worst < 1e-9, sci("max_abs", worst));
}

CheckResult check_fft_parseval(std::mt19937_64& rng) {
  const Frame f = random_frame(rng, 40, 24);
  const ComplexGrid spec = imgproc::fft2(f);
  double e = 0.0;
  for (const auto& c : spec.data) e += std::norm(c);
  e *= double(f.size());  // forward transform carries 1/(WH)
  const double ref = energy(f);
  const double rel = std::abs(e - ref) / ref;
  return check("fft_parseval", rel < 1e-9, sci("rel_err", rel));
}

CheckResult check_entropy_constant() {
  const Frame f = Frame::filled(32, 32, 77);
  const double h = imgproc::entropy(imgproc::histogram(f));
  return check("entropy_constant", h == 0.0, sci("H", h));
}

CheckResult check_entropy_uniform() {
  std::vector<std::uint8_t> data(256 * 4);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<std::uint8_t>(i % 256);
  const double h = imgproc::entropy(imgproc::histogram(Frame(256, 4, std::move(data))));
  return check("entropy_uniform", std::abs(h - 8.0) < 1e-12, sci("H", h));
}

CheckResult check_entropy_oracle(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Frame f = random_frame(rng, 17 + trial, 9);
    const imgproc::Histogram hist = imgproc::histogram(f);
    const double n = double(f.size());
    double ref = 0.0;
    for (auto c : hist.bins) {
      if (c == 0) continue;
      const double p = double(c) / n;
      ref -= p * std::log2(p);
    }
    worst = std::max(worst, std::abs(imgproc::entropy(hist) - ref));
  }
  return check("entropy_oracle", worst < 1e-12, sci("max_abs", worst));
}

CheckResult check_histogram_total(std::mt19937_64& rng) {
  const Frame f = random_frame(rng, 33, 21);
  const imgproc::Histogram hist = imgproc::histogram(f);
  bool ok = hist.total() == f.size();
  for (int x = 0; x < f.width() && ok; ++x) ok = hist.bins[f.at(x, 0)] > 0;
  return check("histogram_total", ok);
}

}  // namespace

BenchResult bench_combined(int width, int height, int frames) {
  synth::Scenario sc;
  sc.name = "bench";
  sc.seed = 7;
  synth::ProceduralBase base;
  base.width = width;
  base.height = height;
  base.frames = frames;
  base.square = synth::MovingSquare{};
  sc.base = base;
  // Tampered second half so the classification path is timed as well.
  if (frames >= 4) {
    synth::TamperSpec blur;
    blur.start = frames / 2;
    blur.end = frames - 1;
    blur.params = synth::DefocusParams{5};
    sc.events.push_back(blur);
  }
  const synth::RenderedClip clip = synth::render(sc);

  auto det = make_detector("combined", DetectorConfig{});
  const auto t0 = std::chrono::steady_clock::now();
  for (const Frame& f : clip.frames) (void)det->step(f);
  const auto t1 = std::chrono::steady_clock::now();

  BenchResult r;
  r.width = width;
  r.height = height;
  r.frames = frames;
  r.seconds = std::chrono::duration<double>(t1 - t0).count();
  r.fps = r.seconds > 0.0 ? frames / r.seconds : 0.0;
  return r;
}

std::vector<CheckResult> run_selftest(const SelftestOptions& options) {
  std::mt19937_64 rng(20240601);
  std::optional<imgproc::ScopedDctNormalizationFault> fault;
  if (options.inject_fault) fault.emplace(1.01);

  std::vector<CheckResult> out;
  out.push_back(check_fft_naive(rng));
  out.push_back(check_fft_round_trip(rng));
  out.push_back(check_fft_parseval(rng));
  out.push_back(check_dct_round_trip(rng));
  out.push_back(check_dct_parseval(rng));
  out.push_back(check_entropy_constant());
  out.push_back(check_entropy_uniform());
  out.push_back(check_entropy_oracle(rng));
  out.push_back(check_histogram_total(rng));
  fault.reset();

  if (options.bench) {
    const BenchResult b = bench_combined(640, 480, options.bench_frames);
    char buf[96];
    std::snprintf(buf, sizeof buf, "fps=%.1f frames=%d", b.fps, b.frames);
    out.push_back(check("bench_combined_640x480", b.fps >= options.bench_min_fps, buf));
  }
  return out;
}

void print_checks(std::ostream& out, const std::vector<CheckResult>& results,
                  std::ostream* details) {
  for (const auto& r : results) {
    out << r.name << ',' << (r.passed ? "pass" : "fail") << '\n';
    if (details && !r.detail.empty()) *details << r.name << ": " << r.detail << '\n';
  }
}

}  // namespace camtamper
