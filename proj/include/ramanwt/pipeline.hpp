#pragma once

#include <string>
#include <vector>

#include "ramanwt/cwt.hpp"
#include "ramanwt/demo.hpp"
#include "ramanwt/eval.hpp"
#include "ramanwt/features.hpp"
#include "ramanwt/image.hpp"
#include "ramanwt/manifest.hpp"
#include "ramanwt/ml.hpp"
#include "ramanwt/noise.hpp"
#include "ramanwt/spectrum.hpp"

namespace ramanwt {

struct TransformOptions {
  std::size_t n_scales = 64;
  double min_scale = 1.0;
  double max_scale = 0.0;  // 0 = quarter of the signal length
  double center_frequency = 1.0;
  std::size_t image_side = 224;
  bool log_compress = true;
  int threads = 0;
};

std::vector<double> transform_scales(std::size_t signal_length, const TransformOptions& opt);

// Spectrum in, square RGB scalogram image out.
Image transform_spectrum(const Spectrum& s, const TransformOptions& opt,
                         std::string* warning = nullptr);

struct TransformedSet {
  std::vector<std::string> class_names;
  std::vector<Image> images;
  std::vector<std::size_t> labels;
  std::vector<std::string> ids;
};

TransformedSet transform_dataset(const Dataset& ds, const TransformOptions& opt,
                                 std::vector<std::string>* warnings = nullptr);

// Spectra live under <dir>/spectra/ as two-column text, listed by index.csv.
void save_dataset(const std::string& dir, const Dataset& ds);
Dataset load_dataset(const std::string& dir);

// Rendered images live under <dir>/images/ as PNG, listed by index.csv.
void save_images(const std::string& dir, const TransformedSet& set);
TransformedSet load_images(const std::string& dir);

// Flattened grayscale features for the classical models.
FeatureMatrix features_of(const TransformedSet& set, std::size_t side = 32);

// Wraps any saved model file as a sweep participant, detecting whether it is
// a classical model or the network from the file itself.
SweepModel load_sweep_model(const std::string& name, const std::string& path);

// Builds matching test sets on demand for a range of noise levels. Every
// level gets its own seed derived from the base seed and the level's bits.
SweepSetGenerator make_sweep_generator(const DatasetManifest& manifest, const BuildOptions& base,
                                       const TransformOptions& topt);

}  // namespace ramanwt
