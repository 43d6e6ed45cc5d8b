#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>

#include "camtamper/frame.hpp"

// Stateless image primitives shared by the detectors. Every function here is
// a pure function of its arguments and may be called from any thread.
namespace camtamper::imgproc {

struct Histogram {
  std::array<std::uint64_t, 256> bins{};

  std::uint64_t total() const;
  /// Lowest intensity holding the maximum count.
  int argmax() const;
  /// Sum of bins[clamp(center + k)] for k in [-half_width, half_width].
  std::uint64_t window_sum(int center, int half_width) const;

  friend bool operator==(const Histogram&, const Histogram&) = default;
};

using ComplexGrid = Grid<std::complex<double>>;

Histogram histogram(const Frame& frame);

/// Shannon entropy in bits of the normalized histogram. Throws DomainError when empty.
double entropy(const Histogram& hist);

/// 3x3 Sobel gradient magnitude; the one-pixel border is zero. Needs a frame of at least 3x3.
RealGrid sobel_magnitude(const Frame& frame);

/// Otsu threshold over a 256-bin quantization of [0, max(values)].
///
/// A value v falls in bin floor(v * 255 / max). The best cut t (bins <= t vs
/// bins > t) maximizes between-class variance, ties going to the lowest t, and
/// the returned threshold is the smallest value mapped above the cut,
/// (t + 1) * max / 255. When every value is identical, that value is returned.
double otsu_threshold(const RealGrid& values);

/// Sobel magnitude binarized at the Otsu threshold. A pixel is an edge when its
/// magnitude is positive and at least the threshold, so flat frames have no edges.
BinaryMap edge_map(const Frame& frame);

/// Orthonormal 2D DCT-II (separable). C(0,0) = mean * sqrt(W * H).
RealGrid dct2(const Frame& frame);
RealGrid dct2(const RealGrid& values);
/// Inverse of dct2 (orthonormal DCT-III).
RealGrid idct2(const RealGrid& coeffs);

/// Forward DFT with the 1/(W*H) factor on the forward pass:
/// F(u,v) = 1/(WH) sum_x sum_y f(x,y) exp(-j 2 pi (ux/W + vy/H)).
/// Grid cell (u, v) holds horizontal frequency u and vertical frequency v.
ComplexGrid fft2(const Frame& frame);
ComplexGrid fft2(const RealGrid& values);
/// Unnormalized inverse; ifft2(fft2(f)) == f.
ComplexGrid ifft2(const ComplexGrid& spectrum);

/// Number of DCT coefficients in the bottom-right quadrant
/// (x >= ceil(W/2), y >= ceil(H/2)) whose magnitude exceeds eps.
std::size_t count_hf_nonzero_dct(const RealGrid& spectrum, double eps);

/// Number of FFT coefficients with |F| > eps lying outside the central
/// rectangle of half-extent min(W,H)/4 once DC is shifted to the grid center.
std::size_t count_hf_nonzero_fft(const ComplexGrid& spectrum, double eps);

/// Centered distance of frequency index k on an axis of length n (DC shifted to n/2).
int centered_frequency_distance(int k, int n);
bool in_fft_hf_region(int u, int v, int width, int height);
bool in_dct_hf_region(int x, int y, int width, int height);
std::size_t dct_hf_region_size(int width, int height);
std::size_t fft_hf_region_size(int width, int height);

/// Separable (2r+1)^2 mean filter, edge-clamped borders, rounded half up. radius 0 is identity.
Frame box_blur(const Frame& frame, int radius);

/// Test hook: scales every dct2 output by `factor` while alive. Used by the
/// self-test to prove its Parseval check can fail.
class ScopedDctNormalizationFault {
 public:
  explicit ScopedDctNormalizationFault(double factor);
  ~ScopedDctNormalizationFault();
  ScopedDctNormalizationFault(const ScopedDctNormalizationFault&) = delete;
  ScopedDctNormalizationFault& operator=(const ScopedDctNormalizationFault&) = delete;

 private:
  double previous_;
};

}  // namespace camtamper::imgproc
