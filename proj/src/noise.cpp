#include "ramanwt/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ramanwt/demo.hpp"
#include "ramanwt/error.hpp"

namespace ramanwt {

namespace {

// Sub-stream tags so baseline, white-noise and level draws never share a
// sequence.
constexpr std::uint64_t kStreamBaseline = 1;
constexpr std::uint64_t kStreamAwgn = 2;
constexpr std::uint64_t kStreamSnr = 3;

}  // namespace

double signal_power(const std::vector<double>& v) {
  if (v.empty()) raise(Errc::EmptyInput, "signal_power of empty vector");
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc / double(v.size());
}

std::vector<double> awgn(const std::vector<double>& clean, double snr_db, Rng& rng,
                         double* measured_snr_db) {
  const double p_signal = signal_power(clean);
  if (p_signal <= 0.0) raise(Errc::ZeroSignal, "cannot set an SNR against an all-zero signal");
  const double p_noise = p_signal * std::pow(10.0, -snr_db / 10.0);

  std::vector<double> noise(clean.size());
  double p_drawn = 0.0;
  for (auto& n : noise) {
    n = rng.gaussian();
    p_drawn += n * n;
  }
  p_drawn /= double(noise.size());
  // Rescale the draw so the realized noise power hits the target exactly
  // rather than only in expectation.
  const double scale = std::sqrt(p_noise / p_drawn);

  std::vector<double> out(clean.size());
  double p_realized = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double n = noise[i] * scale;
    p_realized += n * n;
    out[i] = clean[i] + n;
  }
  p_realized /= double(out.size());
  if (measured_snr_db) *measured_snr_db = 10.0 * std::log10(p_signal / p_realized);
  return out;
}

std::vector<BbnComponent> draw_baseline_components(const Spectrum& s, const BbnConfig& cfg,
                                                   Rng& rng) {
  if (cfg.min_components < 1 || cfg.max_components < cfg.min_components)
    raise(Errc::InvalidArgument, "bad background component count range");
  const double peak = s.peak_intensity();
  const double span = s.axis_span();
  if (peak <= 0.0) raise(Errc::ZeroSignal, "background amplitudes scale with a positive peak");
  if (span <= 0.0) raise(Errc::InvalidArgument, "background wavelengths need a positive axis span");

  const auto count = std::size_t(rng.uniform_int(cfg.min_components, cfg.max_components));
  std::vector<BbnComponent> comps(count);
  for (auto& c : comps) {
    c.amplitude = rng.uniform(cfg.min_rel_amplitude, cfg.max_rel_amplitude) * peak;
    c.wavelength = rng.uniform(cfg.min_rel_wavelength, cfg.max_rel_wavelength) * span;
    c.phase = rng.uniform(0.0, c.wavelength);
  }
  return comps;
}

double baseline_eval(const std::vector<BbnComponent>& components, double x) {
  double acc = 0.0;
  for (const auto& c : components) acc += c.amplitude * std::sin(2.0 * kPi * (x - c.phase) / c.wavelength);
  return acc;
}

std::vector<double> baseline(const Spectrum& s, const std::vector<BbnComponent>& components) {
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = baseline_eval(components, s.wavenumbers[i]);
  return out;
}

NoisySample inject(const Spectrum& clean, const NoiseConfig& cfg) {
  clean.validate();
  NoisySample out;
  out.spectrum = clean;
  out.scenario = cfg.scenario;
  out.target_snr_db = cfg.snr_db;
  out.measured_snr_db = std::numeric_limits<double>::quiet_NaN();
  out.seed = cfg.seed;

  const bool want_baseline = cfg.scenario == Scenario::BB || cfg.scenario == Scenario::GB;
  const bool want_awgn = cfg.scenario == Scenario::GN || cfg.scenario == Scenario::GB;

  // White-noise power always references the clean signal, so the measured SNR
  // stays comparable across scenarios.
  const std::vector<double> reference = clean.intensities;

  if (want_baseline) {
    Rng rng(derive_seed(cfg.seed, kStreamBaseline));
    out.baseline_components = draw_baseline_components(clean, cfg.bbn, rng);
    const auto bg = baseline(clean, out.baseline_components);
    for (std::size_t i = 0; i < out.spectrum.size(); ++i) out.spectrum.intensities[i] += bg[i];
  }
  if (want_awgn) {
    Rng rng(derive_seed(cfg.seed, kStreamAwgn));
    double measured = 0.0;
    auto noisy = awgn(reference, cfg.snr_db, rng, &measured);
    for (std::size_t i = 0; i < out.spectrum.size(); ++i)
      out.spectrum.intensities[i] += noisy[i] - reference[i];
    out.measured_snr_db = measured;
  }
  return out;
}

Dataset build_dataset(const DatasetManifest& manifest, Split split, const BuildOptions& opt) {
  manifest.validate();
  if (opt.realizations < 1) raise(Errc::InvalidArgument, "realizations must be >= 1");
  if (!opt.per_class_totals.empty() && opt.per_class_totals.size() != manifest.class_names.size())
    raise(Errc::InvalidArgument, "per_class_totals must list one count per class");
  if (opt.snr_range && !((*opt.snr_range)[0] <= (*opt.snr_range)[1]))
    raise(Errc::InvalidArgument, "snr_range must be ordered low to high");

  Dataset ds;
  ds.class_names = manifest.class_names;

  // Gather this split's entries per class, in manifest order.
  std::vector<std::vector<const ManifestEntry*>> by_class(manifest.class_names.size());
  for (const auto& e : manifest.entries) {
    if (e.split != split) continue;
    by_class[manifest.label_index(e.label)].push_back(&e);
  }
  for (std::size_t c = 0; c < by_class.size(); ++c)
    if (by_class[c].empty())
      raise(Errc::EmptyClass, "class '" + manifest.class_names[c] + "' has no entries in the " +
                                  std::string(to_string(split)) + " split");

  std::uint64_t counter = 0;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    // Round-robin the class budget over its entries so no entry dominates.
    std::vector<std::size_t> per_entry(by_class[c].size(), std::size_t(opt.realizations));
    if (!opt.per_class_totals.empty()) {
      std::fill(per_entry.begin(), per_entry.end(), std::size_t(0));
      for (std::size_t k = 0; k < opt.per_class_totals[c]; ++k) ++per_entry[k % per_entry.size()];
    }
    for (std::size_t e = 0; e < by_class[c].size(); ++e) {
      const ManifestEntry& entry = *by_class[c][e];
      const Spectrum clean = resolve_source(entry, opt.base_dir, opt.grid_length);
      for (std::size_t r = 0; r < per_entry[e]; ++r) {
        NoiseConfig nc;
        nc.scenario = entry.scenario.value_or(opt.scenario);
        nc.bbn = opt.bbn;
        nc.seed = entry.seed ? *entry.seed + r : derive_seed(opt.seed, counter);
        ++counter;
        if (entry.snr_db) {
          nc.snr_db = *entry.snr_db;
        } else if (opt.snr_range) {
          Rng level_rng(derive_seed(nc.seed, kStreamSnr));
          nc.snr_db = level_rng.uniform((*opt.snr_range)[0], (*opt.snr_range)[1]);
        } else {
          nc.snr_db = opt.snr_db;
        }

        NoisySample noisy = inject(clean, nc);
        DatasetSample sample;
        sample.spectrum = std::move(noisy.spectrum);
        sample.label_index = c;
        sample.split = split;
        sample.scenario = nc.scenario;
        sample.snr_db = nc.snr_db;
        sample.origin_id = entry.id;
        ds.samples.push_back(std::move(sample));
      }
    }
  }
  return ds;
}

}  // namespace ramanwt
