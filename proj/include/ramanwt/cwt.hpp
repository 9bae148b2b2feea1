#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ramanwt {

// Morlet mother wavelet, psi(t) = pi^(-1/4) exp(i 2 pi fc t) exp(-t^2 / 2).
std::complex<double> morlet(double t, double center_frequency = 1.0);

// Log-spaced scale grid with exact endpoints.
std::vector<double> scales_grid(double min_scale, double max_scale, std::size_t count);

// Magnitudes of a continuous wavelet transform, one row per scale.
struct Scalogram {
  std::vector<double> scales;
  std::size_t width = 0;                // number of positions, = input length
  std::vector<double> magnitudes;       // row-major, scales.size() x width

  double& at(std::size_t scale_idx, std::size_t pos) { return magnitudes[scale_idx * width + pos]; }
  double at(std::size_t scale_idx, std::size_t pos) const { return magnitudes[scale_idx * width + pos]; }
};

struct CwtOptions {
  double center_frequency = 1.0;
  // Wavelet support is cut off at |t - b| > truncation * scale; the gaussian
  // envelope is ~1e-14 there.
  double truncation = 8.0;
  int threads = 0;  // 0 = hardware concurrency
};

// Direct-convolution transform with unit sample spacing and zero padding
// outside the signal. Scales must be >= 1 and at most half the signal length.
Scalogram cwt(const std::vector<double>& signal, const std::vector<double>& scales,
              const CwtOptions& opt = {});

}  // namespace ramanwt
