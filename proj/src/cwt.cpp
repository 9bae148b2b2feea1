#include "ramanwt/cwt.hpp"

#include <algorithm>
#include <cmath>

#include "ramanwt/error.hpp"
#include "ramanwt/parallel.hpp"
#include "ramanwt/rng.hpp"

namespace ramanwt {

std::complex<double> morlet(double t, double center_frequency) {
  static const double kNorm = std::pow(kPi, -0.25);
  const double envelope = kNorm * std::exp(-0.5 * t * t);
  const double phase = 2.0 * kPi * center_frequency * t;
  return {envelope * std::cos(phase), envelope * std::sin(phase)};
}

std::vector<double> scales_grid(double min_scale, double max_scale, std::size_t count) {
  if (!(min_scale > 0.0) || !(max_scale > min_scale))
    raise(Errc::InvalidArgument, "scale range must satisfy 0 < min < max");
  if (count < 2) raise(Errc::InvalidArgument, "need at least two scales");
  std::vector<double> scales(count);
  const double log_lo = std::log(min_scale);
  const double log_hi = std::log(max_scale);
  for (std::size_t i = 0; i < count; ++i)
    scales[i] = std::exp(log_lo + (log_hi - log_lo) * double(i) / double(count - 1));
  scales.front() = min_scale;
  scales.back() = max_scale;
  return scales;
}

Scalogram cwt(const std::vector<double>& signal, const std::vector<double>& scales,
              const CwtOptions& opt) {
  const std::size_t n = signal.size();
  if (n == 0) raise(Errc::EmptyInput, "cwt of empty signal");
  if (scales.empty()) raise(Errc::EmptyInput, "cwt with empty scale list");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] >= 1.0))
      raise(Errc::InvalidArgument, "scales below one sample are unresolvable", std::int64_t(i));
    if (scales[i] > double(n) / 2.0)
      raise(Errc::ScaleTooLarge,
            "scale " + std::to_string(scales[i]) + " exceeds half the signal length",
            std::int64_t(i));
  }

  Scalogram out;
  out.scales = scales;
  out.width = n;
  out.magnitudes.assign(scales.size() * n, 0.0);

  parallel_for(
      std::size_t(0), scales.size(),
      [&](std::size_t s) {
        const double a = scales[s];
        const double inv_sqrt_a = 1.0 / std::sqrt(a);
        const auto half = std::size_t(std::ceil(opt.truncation * a));

        // Tabulate the wavelet once per scale; the kernel only depends on the
        // offset t - b.
        std::vector<double> wre(2 * half + 1), wim(2 * half + 1);
        for (std::size_t k = 0; k < wre.size(); ++k) {
          const double t = (double(k) - double(half)) / a;
          const auto w = morlet(t, opt.center_frequency);
          wre[k] = w.real();
          wim[k] = w.imag();
        }

        for (std::size_t b = 0; b < n; ++b) {
          const std::size_t lo = b >= half ? b - half : 0;
          const std::size_t hi = std::min(n - 1, b + half);
          double re = 0.0, im = 0.0;
          const std::size_t k0 = lo + half - b;
          const double* x = signal.data() + lo;
          const double* wr = wre.data() + k0;
          const double* wi = wim.data() + k0;
          const std::size_t len = hi - lo + 1;
          for (std::size_t k = 0; k < len; ++k) {
            // conj(psi) * x
            re += wr[k] * x[k];
            im -= wi[k] * x[k];
          }
          out.at(s, b) = inv_sqrt_a * std::sqrt(re * re + im * im);
        }
      },
      opt.threads);
  return out;
}

}  // namespace ramanwt
