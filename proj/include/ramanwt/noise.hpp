#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ramanwt/manifest.hpp"
#include "ramanwt/rng.hpp"
#include "ramanwt/spectrum.hpp"

namespace ramanwt {

// One sinusoidal component of a broad-band background.
struct BbnComponent {
  double amplitude = 0.0;
  double wavelength = 0.0;  // in wavenumber units along the x axis
  double phase = 0.0;       // same units, subtracted from x
};

// Ranges used when drawing background components. Amplitudes are relative to
// the peak signal intensity, wavelengths relative to the x-axis span.
struct BbnConfig {
  int min_components = 1;
  int max_components = 5;
  double min_rel_amplitude = 0.1;
  double max_rel_amplitude = 1.0;
  double min_rel_wavelength = 0.2;
  double max_rel_wavelength = 1.0;
};

struct NoiseConfig {
  Scenario scenario = Scenario::GB;
  double snr_db = 10.0;  // target SNR for the additive white noise
  BbnConfig bbn;
  std::uint64_t seed = 0;
};

// A noisy realization together with what was actually applied to produce it.
struct NoisySample {
  Spectrum spectrum;
  Scenario scenario = Scenario::Clean;
  double target_snr_db = 0.0;
  double measured_snr_db = 0.0;  // NaN when no white noise was added
  std::vector<BbnComponent> baseline_components;
  std::uint64_t seed = 0;
};

// Mean squared intensity.
double signal_power(const std::vector<double>& v);

// Adds zero-mean white gaussian noise scaled so the realized noise power hits
// the target SNR exactly against the measured power of `clean`.
std::vector<double> awgn(const std::vector<double>& clean, double snr_db, Rng& rng,
                         double* measured_snr_db = nullptr);

std::vector<BbnComponent> draw_baseline_components(const Spectrum& s, const BbnConfig& cfg,
                                                   Rng& rng);

double baseline_eval(const std::vector<BbnComponent>& components, double x);

// Sum-of-sinusoids background sampled on the spectrum's wavenumber axis.
std::vector<double> baseline(const Spectrum& s, const std::vector<BbnComponent>& components);

// Applies the configured corruption to a clean spectrum. The white-noise SNR
// is always computed against the clean signal power, also when a background
// has been added first.
NoisySample inject(const Spectrum& clean, const NoiseConfig& cfg);

struct DatasetSample {
  Spectrum spectrum;
  std::size_t label_index = 0;
  Split split = Split::Train;
  Scenario scenario = Scenario::Clean;
  double snr_db = 0.0;
  std::string origin_id;  // manifest entry this realization came from
};

struct Dataset {
  std::vector<std::string> class_names;
  std::vector<DatasetSample> samples;
};

struct BuildOptions {
  std::size_t grid_length = 1024;
  Scenario scenario = Scenario::GB;
  double snr_db = 10.0;
  // When set, each realization draws its own SNR uniformly from [lo, hi]
  // instead of using snr_db; an entry with a pinned level keeps it.
  std::optional<std::array<double, 2>> snr_range;
  BbnConfig bbn;
  std::uint64_t seed = 0;
  // Noisy realizations generated per manifest entry.
  int realizations = 1;
  // When set, per-class totals override `realizations`: each class gets this
  // many realizations distributed round-robin over its entries.
  std::vector<std::size_t> per_class_totals;
  std::string base_dir;
};

// Expands a manifest split into noisy realizations. Every sample gets its own
// sub-seed derived from the build seed and a running counter, so one dataset
// is reproducible piecewise and two builds from the same seed are identical.
Dataset build_dataset(const DatasetManifest& manifest, Split split, const BuildOptions& opt);

}  // namespace ramanwt
