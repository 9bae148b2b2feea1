#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ramanwt/manifest.hpp"
#include "ramanwt/spectrum.hpp"

namespace ramanwt {

// Bundled synthetic material profiles: Lorentzian peak sets loosely imitating
// five mineral footprints, so the toolkit runs self-contained without any
// external spectrum files. Variants jitter peak positions, widths and heights
// deterministically, standing in for the natural footprint spread between
// measurements of one material.

std::vector<std::string> demo_class_names();

std::vector<LorentzPeak> demo_profile(const std::string& class_name, std::uint64_t variant);

Spectrum demo_spectrum(const std::string& class_name, std::uint64_t variant,
                       std::size_t grid_length);

// Manifest with `variants` originals per class; each variant appears once as
// a train entry and once as a test entry (same clean signal, different noise
// draws downstream).
DatasetManifest demo_manifest(int variants_per_class);

// Turns a manifest entry into a clean spectrum on a uniform grid of
// `grid_length` points, min-max normalized. Handles both file paths
// (relative to base_dir unless absolute) and "synth:<profile>:<variant>".
Spectrum resolve_source(const ManifestEntry& entry, const std::string& base_dir,
                        std::size_t grid_length);

}  // namespace ramanwt
