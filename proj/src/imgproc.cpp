#include "camtamper/imgproc.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "camtamper/errors.hpp"

namespace camtamper::imgproc {
namespace {

std::atomic<double> g_dct_scale{1.0};

enum class PlanKind { DctForward, DctInverse, DftForward, DftInverse };

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(PlanKind kind, int width, int height) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(kind, width, height);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const std::size_t n = static_cast<std::size_t>(width) * height;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    if (kind == PlanKind::DctForward || kind == PlanKind::DctInverse) {
      double* in = fftw_alloc_real(n);
      double* out = fftw_alloc_real(n);
      auto r2r = kind == PlanKind::DctForward ? FFTW_REDFT10 : FFTW_REDFT01;
      plan = fftw_plan_r2r_2d(height, width, in, out, r2r, r2r, flags);
      fftw_free(in);
      fftw_free(out);
    } else {
      fftw_complex* in = fftw_alloc_complex(n);
      fftw_complex* out = fftw_alloc_complex(n);
      int sign = kind == PlanKind::DftForward ? FFTW_FORWARD : FFTW_BACKWARD;
      plan = fftw_plan_dft_2d(height, width, in, out, sign, flags);
      fftw_free(in);
      fftw_free(out);
    }
    if (plan == nullptr) throw Error("FFTW could not create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<PlanKind, int, int>, fftw_plan> plans_;
};

RealGrid to_real(const Frame& frame) {
  RealGrid g(frame.width(), frame.height());
  auto luma = frame.luma();
  std::copy(luma.begin(), luma.end(), g.data.begin());
  return g;
}

// Per-axis factor turning FFTW's REDFT10 output into orthonormal DCT-II.
double dct_forward_scale(int k, int n) {
  double s = 1.0 / std::sqrt(2.0 * n);
  return k == 0 ? s / std::sqrt(2.0) : s;
}

// Per-axis prescale so FFTW's REDFT01 computes the orthonormal DCT-III.
double dct_inverse_scale(int k, int n) {
  return k == 0 ? 1.0 / std::sqrt(static_cast<double>(n)) : 1.0 / std::sqrt(2.0 * n);
}

}  // namespace

std::uint64_t Histogram::total() const {
  std::uint64_t t = 0;
  for (auto b : bins) t += b;
  return t;
}

int Histogram::argmax() const {
  return static_cast<int>(std::max_element(bins.begin(), bins.end()) - bins.begin());
}

std::uint64_t Histogram::window_sum(int center, int half_width) const {
  std::uint64_t s = 0;
  for (int k = -half_width; k <= half_width; ++k) s += bins[std::clamp(center + k, 0, 255)];
  return s;
}

Histogram histogram(const Frame& frame) {
  Histogram h;
  for (auto v : frame.luma()) ++h.bins[v];
  return h;
}

double entropy(const Histogram& hist) {
  const std::uint64_t total = hist.total();
  if (total == 0) throw DomainError("entropy of an empty histogram");
  const double n = static_cast<double>(total);
  double e = 0.0;
  for (auto b : hist.bins) {
    if (b == 0) continue;
    const double p = static_cast<double>(b) / n;
    e -= p * std::log2(p);
  }
  return e;
}

RealGrid sobel_magnitude(const Frame& frame) {
  const int w = frame.width();
  const int h = frame.height();
  if (w < 3 || h < 3) throw DomainError("sobel_magnitude needs at least a 3x3 frame");
  RealGrid out(w, h, 0.0);
  auto px = frame.luma();
  for (int y = 1; y < h - 1; ++y) {
    const std::uint8_t* up = px.data() + static_cast<std::size_t>(y - 1) * w;
    const std::uint8_t* mid = up + w;
    const std::uint8_t* dn = mid + w;
    double* row = out.data.data() + static_cast<std::size_t>(y) * w;
    for (int x = 1; x < w - 1; ++x) {
      const int gx = (up[x + 1] + 2 * mid[x + 1] + dn[x + 1]) - (up[x - 1] + 2 * mid[x - 1] + dn[x - 1]);
      const int gy = (dn[x - 1] + 2 * dn[x] + dn[x + 1]) - (up[x - 1] + 2 * up[x] + up[x + 1]);
      row[x] = std::sqrt(static_cast<double>(gx * gx + gy * gy));
    }
  }
  return out;
}

double otsu_threshold(const RealGrid& values) {
  if (values.data.empty()) throw DomainError("otsu_threshold of an empty grid");
  auto [lo_it, hi_it] = std::minmax_element(values.data.begin(), values.data.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (lo < 0.0) throw DomainError("otsu_threshold expects non-negative values");
  if (lo == hi) return hi;

  std::array<std::uint64_t, 256> bins{};
  for (double v : values.data) {
    bins[std::min(255, static_cast<int>(std::floor(v * 255.0 / hi)))]++;
  }
  const std::uint64_t n = values.data.size();
  std::uint64_t sum_all = 0;
  for (int i = 0; i < 256; ++i) sum_all += static_cast<std::uint64_t>(i) * bins[i];

  std::uint64_t c0 = 0;
  std::uint64_t s0 = 0;
  double best = -1.0;
  int best_cut = 0;
  for (int t = 0; t < 255; ++t) {
    c0 += bins[t];
    s0 += static_cast<std::uint64_t>(t) * bins[t];
    const std::uint64_t c1 = n - c0;
    if (c0 == 0 || c1 == 0) continue;
    const double w0 = static_cast<double>(c0) / static_cast<double>(n);
    const double w1 = static_cast<double>(c1) / static_cast<double>(n);
    const double mu0 = static_cast<double>(s0) / static_cast<double>(c0);
    const double mu1 = static_cast<double>(sum_all - s0) / static_cast<double>(c1);
    const double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (between > best) {
      best = between;
      best_cut = t;
    }
  }
  return (best_cut + 1) * hi / 255.0;
}

BinaryMap edge_map(const Frame& frame) {
  RealGrid mag = sobel_magnitude(frame);
  const double thr = otsu_threshold(mag);
  BinaryMap map(mag.width, mag.height);
  for (std::size_t i = 0; i < mag.data.size(); ++i) {
    map.data[i] = (mag.data[i] > 0.0 && mag.data[i] >= thr) ? 1 : 0;
  }
  return map;
}

RealGrid dct2(const RealGrid& values) {
  const int w = values.width;
  const int h = values.height;
  if (w < 1 || h < 1) throw DomainError("dct2 of an empty grid");
  RealGrid out(w, h);
  RealGrid in = values;
  fftw_execute_r2r(PlanCache::instance().get(PlanKind::DctForward, w, h), in.data.data(),
                   out.data.data());
  const double fault = g_dct_scale.load(std::memory_order_relaxed);
  std::vector<double> sx(w);
  for (int u = 0; u < w; ++u) sx[u] = dct_forward_scale(u, w);
  for (int v = 0; v < h; ++v) {
    const double sy = dct_forward_scale(v, h) * fault;
    double* row = out.data.data() + static_cast<std::size_t>(v) * w;
    for (int u = 0; u < w; ++u) row[u] *= sx[u] * sy;
  }
  return out;
}

RealGrid dct2(const Frame& frame) { return dct2(to_real(frame)); }

RealGrid idct2(const RealGrid& coeffs) {
  const int w = coeffs.width;
  const int h = coeffs.height;
  if (w < 1 || h < 1) throw DomainError("idct2 of an empty grid");
  RealGrid in(w, h);
  std::vector<double> sx(w);
  for (int u = 0; u < w; ++u) sx[u] = dct_inverse_scale(u, w);
  for (int v = 0; v < h; ++v) {
    const double sy = dct_inverse_scale(v, h);
    for (int u = 0; u < w; ++u) in.at(u, v) = coeffs.at(u, v) * sx[u] * sy;
  }
  RealGrid out(w, h);
  fftw_execute_r2r(PlanCache::instance().get(PlanKind::DctInverse, w, h), in.data.data(),
                   out.data.data());
  return out;
}

ComplexGrid fft2(const RealGrid& values) {
  const int w = values.width;
  const int h = values.height;
  if (w < 1 || h < 1) throw DomainError("fft2 of an empty grid");
  ComplexGrid in(w, h);
  for (std::size_t i = 0; i < values.data.size(); ++i) in.data[i] = values.data[i];
  ComplexGrid out(w, h);
  fftw_execute_dft(PlanCache::instance().get(PlanKind::DftForward, w, h),
                   reinterpret_cast<fftw_complex*>(in.data.data()),
                   reinterpret_cast<fftw_complex*>(out.data.data()));
  const double norm = 1.0 / (static_cast<double>(w) * h);
  for (auto& c : out.data) c *= norm;
  return out;
}

ComplexGrid fft2(const Frame& frame) { return fft2(to_real(frame)); }

ComplexGrid ifft2(const ComplexGrid& spectrum) {
  const int w = spectrum.width;
  const int h = spectrum.height;
  if (w < 1 || h < 1) throw DomainError("ifft2 of an empty grid");
  ComplexGrid in = spectrum;
  ComplexGrid out(w, h);
  fftw_execute_dft(PlanCache::instance().get(PlanKind::DftInverse, w, h),
                   reinterpret_cast<fftw_complex*>(in.data.data()),
                   reinterpret_cast<fftw_complex*>(out.data.data()));
  return out;
}

bool in_dct_hf_region(int x, int y, int width, int height) {
  return x >= (width + 1) / 2 && y >= (height + 1) / 2;
}

std::size_t dct_hf_region_size(int width, int height) {
  return static_cast<std::size_t>(width - (width + 1) / 2) *
         static_cast<std::size_t>(height - (height + 1) / 2);
}

int centered_frequency_distance(int k, int n) {
  const int c = n / 2;
  const int shifted = (k + c) % n;
  return std::abs(shifted - c);
}

bool in_fft_hf_region(int u, int v, int width, int height) {
  const double half_extent = std::min(width, height) / 4.0;
  const int d = std::max(centered_frequency_distance(u, width), centered_frequency_distance(v, height));
  return d > half_extent;
}

std::size_t fft_hf_region_size(int width, int height) {
  std::size_t n = 0;
  for (int v = 0; v < height; ++v)
    for (int u = 0; u < width; ++u) n += in_fft_hf_region(u, v, width, height);
  return n;
}

std::size_t count_hf_nonzero_dct(const RealGrid& spectrum, double eps) {
  std::size_t n = 0;
  for (int y = (spectrum.height + 1) / 2; y < spectrum.height; ++y)
    for (int x = (spectrum.width + 1) / 2; x < spectrum.width; ++x)
      n += std::abs(spectrum.at(x, y)) > eps;
  return n;
}

std::size_t count_hf_nonzero_fft(const ComplexGrid& spectrum, double eps) {
  const int w = spectrum.width;
  const int h = spectrum.height;
  const double half_extent = std::min(w, h) / 4.0;
  std::vector<int> dist_u(w);
  for (int u = 0; u < w; ++u) dist_u[u] = centered_frequency_distance(u, w);
  std::size_t n = 0;
  for (int v = 0; v < h; ++v) {
    const int dv = centered_frequency_distance(v, h);
    for (int u = 0; u < w; ++u) {
      if (std::max(dist_u[u], dv) > half_extent && std::abs(spectrum.at(u, v)) > eps) ++n;
    }
  }
  return n;
}

Frame box_blur(const Frame& frame, int radius) {
  if (radius < 0) throw DomainError("box_blur radius must be non-negative");
  if (radius == 0) return frame;
  const int w = frame.width();
  const int h = frame.height();
  auto px = frame.luma();
  // Horizontal window sums, then vertical sums of those: exact integer box sums.
  std::vector<std::uint32_t> horiz(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* row = px.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      std::uint32_t s = 0;
      for (int k = -radius; k <= radius; ++k) s += row[std::clamp(x + k, 0, w - 1)];
      horiz[static_cast<std::size_t>(y) * w + x] = s;
    }
  }
  const std::uint64_t area = static_cast<std::uint64_t>(2 * radius + 1) * (2 * radius + 1);
  std::vector<std::uint8_t> out(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::uint64_t s = 0;
      for (int k = -radius; k <= radius; ++k) {
        s += horiz[static_cast<std::size_t>(std::clamp(y + k, 0, h - 1)) * w + x];
      }
      out[static_cast<std::size_t>(y) * w + x] = static_cast<std::uint8_t>((s + area / 2) / area);
    }
  }
  return Frame(w, h, std::move(out), frame.index());
}

ScopedDctNormalizationFault::ScopedDctNormalizationFault(double factor)
    : previous_(g_dct_scale.exchange(factor)) {}

ScopedDctNormalizationFault::~ScopedDctNormalizationFault() { g_dct_scale.store(previous_); }

}  // namespace camtamper::imgproc
