#pragma once

#include <cstddef>
#include <vector>

#include "ramanwt/image.hpp"

namespace ramanwt {

// Per-pixel mean of the three channels, row-major, in [0, 255].
std::vector<double> luminance(const Image& img);

// Area-weighted reduction of a grayscale raster to side x side. Every source
// pixel contributes to the target cells it overlaps, proportionally to the
// overlap, so totals are preserved for any size ratio.
std::vector<double> downsample_area(const std::vector<double>& gray, std::size_t width,
                                    std::size_t height, std::size_t side);

// The classical-model feature vector: grayscale, reduced to side x side,
// flattened, scaled to [0, 1].
std::vector<double> image_features(const Image& img, std::size_t side = 32);

}  // namespace ramanwt
