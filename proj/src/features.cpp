#include "ramanwt/features.hpp"

#include <algorithm>
#include <cmath>

#include "ramanwt/error.hpp"

namespace ramanwt {

std::vector<double> luminance(const Image& img) {
  if (img.pixels.size() != 3 * img.width * img.height)
    raise(Errc::ShapeMismatch, "pixel buffer does not match image dimensions");
  std::vector<double> gray(img.width * img.height);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const std::uint8_t* p = img.pixels.data() + 3 * i;
    gray[i] = (double(p[0]) + double(p[1]) + double(p[2])) / 3.0;
  }
  return gray;
}

std::vector<double> downsample_area(const std::vector<double>& gray, std::size_t width,
                                    std::size_t height, std::size_t side) {
  if (gray.size() != width * height) raise(Errc::ShapeMismatch, "raster size mismatch");
  if (side == 0) raise(Errc::InvalidArgument, "target side must be positive");

  std::vector<double> acc(side * side, 0.0);
  const double cell_w = double(width) / double(side);
  const double cell_h = double(height) / double(side);
  for (std::size_t y = 0; y < height; ++y) {
    const double y0 = double(y), y1 = y0 + 1.0;
    const auto ty0 = std::size_t(y0 / cell_h);
    const auto ty1 = std::min(side - 1, std::size_t((y1 - 1e-12) / cell_h));
    for (std::size_t x = 0; x < width; ++x) {
      const double x0 = double(x), x1 = x0 + 1.0;
      const auto tx0 = std::size_t(x0 / cell_w);
      const auto tx1 = std::min(side - 1, std::size_t((x1 - 1e-12) / cell_w));
      for (std::size_t ty = ty0; ty <= ty1; ++ty) {
        const double oy = std::min(y1, double(ty + 1) * cell_h) - std::max(y0, double(ty) * cell_h);
        for (std::size_t tx = tx0; tx <= tx1; ++tx) {
          const double ox =
              std::min(x1, double(tx + 1) * cell_w) - std::max(x0, double(tx) * cell_w);
          acc[ty * side + tx] += gray[y * width + x] * ox * oy;
        }
      }
    }
  }
  // Normalize by cell area so values stay on the input scale.
  const double inv_area = 1.0 / (cell_w * cell_h);
  for (auto& v : acc) v *= inv_area;
  return acc;
}

std::vector<double> image_features(const Image& img, std::size_t side) {
  auto features = downsample_area(luminance(img), img.width, img.height, side);
  for (auto& v : features) v /= 255.0;
  return features;
}

}  // namespace ramanwt
