#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "ramanwt/cwt.hpp"
#include "ramanwt/error.hpp"
#include "ramanwt/rng.hpp"

using namespace ramanwt;

namespace {

// Direct evaluation of |<x, psi_{a,b}>| / sqrt(a) over the full signal
// support, written out from the defining integral without reusing any
// library code. The production transform truncates the wavelet where its
// envelope is ~1e-14, so the two agree to well below the tolerance used
// here.
double direct_coefficient(const std::vector<double>& x, double a, std::size_t b, double fc) {
  std::complex<double> acc(0.0, 0.0);
  const double norm = std::pow(kPi, -0.25);
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double u = (double(t) - double(b)) / a;
    const std::complex<double> psi =
        norm * std::exp(-0.5 * u * u) *
        std::complex<double>(std::cos(2.0 * kPi * fc * u), std::sin(2.0 * kPi * fc * u));
    acc += x[t] * std::conj(psi);
  }
  return std::abs(acc) / std::sqrt(a);
}

}  // namespace

TEST_CASE("morlet takes its documented values") {
  // psi(0) = pi^(-1/4), psi(1) at fc = 1 wraps a full phase turn
  const auto at0 = morlet(0.0);
  CHECK(at0.real() == doctest::Approx(0.75112554446494251).epsilon(1e-15));
  CHECK(at0.imag() == 0.0);

  const auto at1 = morlet(1.0, 1.0);
  CHECK(at1.real() == doctest::Approx(0.45558067201133257).epsilon(1e-12));
  CHECK(std::abs(at1.imag()) < 1e-15);

  // symmetric envelope, conjugate-symmetric phase
  const auto plus = morlet(0.3, 2.0);
  const auto minus = morlet(-0.3, 2.0);
  CHECK(plus.real() == doctest::Approx(minus.real()).epsilon(1e-15));
  CHECK(plus.imag() == doctest::Approx(-minus.imag()).epsilon(1e-15));
}

TEST_CASE("scales_grid is log-spaced with exact endpoints") {
  const auto g = scales_grid(2.0, 64.0, 11);
  REQUIRE(g.size() == 11);
  CHECK(g.front() == 2.0);
  CHECK(g.back() == 64.0);
  const double ratio = g[1] / g[0];
  for (std::size_t i = 1; i < g.size(); ++i)
    CHECK(g[i] / g[i - 1] == doctest::Approx(ratio).epsilon(1e-12));

  CHECK_THROWS_AS(scales_grid(2.0, 64.0, 1), Error);
  CHECK_THROWS_AS(scales_grid(0.0, 64.0, 8), Error);
  CHECK_THROWS_AS(scales_grid(5.0, 5.0, 8), Error);
}

TEST_CASE("cwt rejects unusable scales with the offending index") {
  const std::vector<double> x(64, 1.0);
  try {
    cwt(x, {2.0, 0.5});
    FAIL("expected a scale error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidArgument);
    CHECK(e.index() == 1);
  }
  try {
    cwt(x, {2.0, 4.0, 40.0});
    FAIL("expected a scale-too-large error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ScaleTooLarge);
    CHECK(e.index() == 2);
  }
  CHECK_THROWS_AS(cwt({}, {2.0}), Error);
  CHECK_THROWS_AS(cwt(x, {}), Error);
}

TEST_CASE("cwt matches a direct evaluation of the defining sum") {
  Rng rng(77);
  std::vector<double> x(96);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);

  const std::vector<double> scales = {1.0, 3.7, 9.0, 24.0};
  const Scalogram sg = cwt(x, scales);
  REQUIRE(sg.scales == scales);
  REQUIRE(sg.width == x.size());

  for (std::size_t s = 0; s < scales.size(); ++s) {
    for (std::size_t b = 0; b < x.size(); b += 7) {
      const double expected = direct_coefficient(x, scales[s], b, 1.0);
      CHECK(sg.at(s, b) == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("cwt honors a non-default center frequency") {
  Rng rng(78);
  std::vector<double> x(64);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);

  CwtOptions opt;
  opt.center_frequency = 1.5;
  const Scalogram sg = cwt(x, {4.0}, opt);
  for (std::size_t b = 0; b < x.size(); b += 9)
    CHECK(sg.at(0, b) == doctest::Approx(direct_coefficient(x, 4.0, b, 1.5)).epsilon(1e-9));
}

TEST_CASE("cwt output does not depend on the thread count") {
  Rng rng(5);
  std::vector<double> x(200);
  for (auto& v : x) v = rng.gaussian();
  const auto scales = scales_grid(1.0, 50.0, 12);

  CwtOptions one;
  one.threads = 1;
  CwtOptions four;
  four.threads = 4;
  const Scalogram a = cwt(x, scales, one);
  const Scalogram b = cwt(x, scales, four);
  CHECK(a.magnitudes == b.magnitudes);
}

TEST_CASE("the scalogram ridge tracks an oscillation's period") {
  // cos(2 pi t / T) concentrates near scale a = fc * T at the center of the
  // signal; on a log grid the argmax must land within one step of T.
  const std::size_t n = 512;
  const double period = 16.0;
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) x[t] = std::cos(2.0 * kPi * double(t) / period);

  const auto scales = scales_grid(1.0, 128.0, 48);
  const Scalogram sg = cwt(x, scales);

  const std::size_t center = n / 2;
  std::size_t best = 0;
  for (std::size_t s = 1; s < scales.size(); ++s)
    if (sg.at(s, center) > sg.at(best, center)) best = s;

  const double step = scales[1] / scales[0];
  CHECK(scales[best] / period < step);
  CHECK(period / scales[best] < step);
}
