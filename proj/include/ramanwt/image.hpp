#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ramanwt/cwt.hpp"

namespace ramanwt {

// 8-bit RGB raster, row-major, no padding.
struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // 3 * width * height

  std::uint8_t* px(std::size_t x, std::size_t y) { return pixels.data() + 3 * (y * width + x); }
  const std::uint8_t* px(std::size_t x, std::size_t y) const {
    return pixels.data() + 3 * (y * width + x);
  }
};

// Blue-to-red lookup table applied to normalized magnitudes.
extern const std::array<std::array<std::uint8_t, 3>, 256> kColormap;

struct RenderOptions {
  std::size_t side = 224;   // output is side x side
  bool log_compress = true; // log1p the magnitudes before normalizing
};

// Maps a scalogram to a square RGB image: optional log compression, min-max
// normalization over the whole matrix, colormap lookup, bilinear resize.
// A constant matrix renders as a flat mid-colormap image; `warning`, when
// given, is set to a short note in that case and cleared otherwise.
Image render_scalogram(const Scalogram& sg, const RenderOptions& opt = {},
                       std::string* warning = nullptr);

// Bilinear resampling of an RGB image to a new size.
Image resize_bilinear(const Image& src, std::size_t width, std::size_t height);

std::vector<std::uint8_t> encode_png(const Image& img);
Image decode_png(const std::vector<std::uint8_t>& bytes);

void write_png(const std::string& path, const Image& img);
Image read_png(const std::string& path);

// Raw magnitudes as CSV, one scalogram row per line, for inspection outside
// the toolchain.
void write_matrix_csv(const std::string& path, const Scalogram& sg);

}  // namespace ramanwt
