#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ramanwt {

inline constexpr std::size_t kMinSpectrumPoints = 16;

// A 1-D Raman signal on a strictly ascending wavenumber axis.
struct Spectrum {
  std::vector<double> wavenumbers;  // cm^-1
  std::vector<double> intensities;  // arbitrary units
  std::string label;                // class name, empty = unlabeled
  std::string source_id;

  std::size_t size() const { return wavenumbers.size(); }
  double axis_span() const { return wavenumbers.back() - wavenumbers.front(); }
  double peak_intensity() const;

  // Throws on broken invariants: equal lengths, >= 16 points, strictly
  // ascending axis, finite values.
  void validate() const;
};

struct LorentzPeak {
  double center;  // cm^-1
  double width;   // half width at half maximum, cm^-1
  double height;
};

// RRUFF text format: `##KEY=VALUE` metadata lines and `x, y` data rows
// (comma- or whitespace-separated). The label comes from ##NAMES= when
// present. Data rows are sorted ascending by wavenumber; duplicated
// wavenumbers keep the first occurrence and append a warning.
Spectrum parse_rruff(const std::string& text, std::vector<std::string>* warnings = nullptr);
std::string serialize_rruff(const Spectrum& s);

Spectrum parse_rruff_file(const std::string& path, std::vector<std::string>* warnings = nullptr);

// Sum of Lorentzian peaks evaluated on `grid`, min-max normalized to [0,1].
Spectrum synth_lorentzian(const std::vector<LorentzPeak>& peaks, const std::vector<double>& grid);

// Linear interpolation onto n uniformly spaced wavenumbers spanning
// [min, max] of s; endpoints preserved exactly.
Spectrum resample(const Spectrum& s, std::size_t n);

// Min-max scaling to [0,1]; constant signals are returned unchanged.
Spectrum normalize(const Spectrum& s);

std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace ramanwt
