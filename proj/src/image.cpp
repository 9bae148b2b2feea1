#include "ramanwt/image.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "ramanwt/csv.hpp"
#include "ramanwt/error.hpp"
#include "ramanwt/serialize.hpp"

namespace ramanwt {

namespace {

std::array<std::uint8_t, 3> sample_colormap(double v) {
  // v in [0, 1]; interpolate between neighboring table entries.
  const double pos = v * 255.0;
  const auto lo = std::size_t(std::clamp(std::floor(pos), 0.0, 255.0));
  const std::size_t hi = std::min<std::size_t>(lo + 1, 255);
  const double f = pos - double(lo);
  std::array<std::uint8_t, 3> out{};
  for (int c = 0; c < 3; ++c) {
    const double mixed = double(kColormap[lo][c]) * (1.0 - f) + double(kColormap[hi][c]) * f;
    out[c] = std::uint8_t(std::lround(mixed));
  }
  return out;
}

}  // namespace

Image render_scalogram(const Scalogram& sg, const RenderOptions& opt, std::string* warning) {
  if (sg.magnitudes.empty()) raise(Errc::EmptyInput, "cannot render an empty scalogram");
  if (opt.side == 0) raise(Errc::InvalidArgument, "output side must be positive");
  if (warning) warning->clear();

  std::vector<double> values = sg.magnitudes;
  if (opt.log_compress)
    for (auto& v : values) v = std::log1p(v);

  const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
  const double mn = *mn_it, mx = *mx_it;

  Image full;
  full.height = sg.scales.size();
  full.width = sg.width;
  full.pixels.resize(3 * full.width * full.height);

  if (!(mx > mn)) {
    // A flat matrix carries no contrast to stretch; render mid-ramp instead of
    // failing so batch runs keep going.
    if (warning) *warning = "constant scalogram, rendered without contrast";
    const auto mid = sample_colormap(0.5);
    for (std::size_t i = 0; i < full.width * full.height; ++i)
      std::copy(mid.begin(), mid.end(), full.pixels.begin() + 3 * i);
  } else {
    const double inv = 1.0 / (mx - mn);
    // Row 0 of the image is the largest scale so low frequencies sit at the
    // bottom once the image is viewed y-down.
    for (std::size_t s = 0; s < full.height; ++s) {
      const std::size_t row = full.height - 1 - s;
      for (std::size_t b = 0; b < full.width; ++b) {
        const auto rgb = sample_colormap((values[s * sg.width + b] - mn) * inv);
        std::copy(rgb.begin(), rgb.end(), full.px(b, row));
      }
    }
  }
  if (full.width == opt.side && full.height == opt.side) return full;
  return resize_bilinear(full, opt.side, opt.side);
}

Image resize_bilinear(const Image& src, std::size_t width, std::size_t height) {
  if (src.width == 0 || src.height == 0) raise(Errc::EmptyInput, "resize of empty image");
  if (width == 0 || height == 0) raise(Errc::InvalidArgument, "resize target must be positive");
  Image out;
  out.width = width;
  out.height = height;
  out.pixels.resize(3 * width * height);

  // Pixel centers are aligned so corners map to corners.
  const double sx = width > 1 ? double(src.width - 1) / double(width - 1) : 0.0;
  const double sy = height > 1 ? double(src.height - 1) / double(height - 1) : 0.0;
  for (std::size_t y = 0; y < height; ++y) {
    const double fy = double(y) * sy;
    const auto y0 = std::size_t(fy);
    const std::size_t y1 = std::min(y0 + 1, src.height - 1);
    const double wy = fy - double(y0);
    for (std::size_t x = 0; x < width; ++x) {
      const double fx = double(x) * sx;
      const auto x0 = std::size_t(fx);
      const std::size_t x1 = std::min(x0 + 1, src.width - 1);
      const double wx = fx - double(x0);
      const std::uint8_t* p00 = src.px(x0, y0);
      const std::uint8_t* p10 = src.px(x1, y0);
      const std::uint8_t* p01 = src.px(x0, y1);
      const std::uint8_t* p11 = src.px(x1, y1);
      std::uint8_t* dst = out.px(x, y);
      for (int c = 0; c < 3; ++c) {
        const double top = double(p00[c]) * (1.0 - wx) + double(p10[c]) * wx;
        const double bot = double(p01[c]) * (1.0 - wx) + double(p11[c]) * wx;
        dst[c] = std::uint8_t(std::lround(top * (1.0 - wy) + bot * wy));
      }
    }
  }
  return out;
}

namespace {

void push_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(std::uint8_t(v >> 24));
  out.push_back(std::uint8_t(v >> 16));
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v));
}

std::uint32_t read_u32_be(const std::uint8_t* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
         std::uint32_t(p[3]);
}

void push_chunk(std::vector<std::uint8_t>& out, const char type[4],
                const std::vector<std::uint8_t>& data) {
  push_u32_be(out, std::uint32_t(data.size()));
  const std::size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const auto crc = std::uint32_t(
      ::crc32(0, out.data() + crc_start, uInt(out.size() - crc_start)));
  push_u32_be(out, crc);
}

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

constexpr std::uint8_t kPngSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

}  // namespace

std::vector<std::uint8_t> encode_png(const Image& img) {
  if (img.width == 0 || img.height == 0) raise(Errc::EmptyInput, "encode of empty image");
  if (img.pixels.size() != 3 * img.width * img.height)
    raise(Errc::ShapeMismatch, "pixel buffer does not match image dimensions");

  // One filter byte (0 = none) ahead of every scanline.
  const std::size_t stride = 3 * img.width;
  std::vector<std::uint8_t> raw((stride + 1) * img.height);
  for (std::size_t y = 0; y < img.height; ++y) {
    raw[y * (stride + 1)] = 0;
    std::memcpy(raw.data() + y * (stride + 1) + 1, img.pixels.data() + y * stride, stride);
  }

  uLongf bound = ::compressBound(uLong(raw.size()));
  std::vector<std::uint8_t> deflated(bound);
  if (::compress2(deflated.data(), &bound, raw.data(), uLong(raw.size()), 6) != Z_OK)
    raise(Errc::IoError, "deflate failed while encoding image");
  deflated.resize(bound);

  std::vector<std::uint8_t> out(kPngSignature, kPngSignature + 8);
  std::vector<std::uint8_t> ihdr;
  push_u32_be(ihdr, std::uint32_t(img.width));
  push_u32_be(ihdr, std::uint32_t(img.height));
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(2);  // truecolor
  ihdr.push_back(0);  // deflate
  ihdr.push_back(0);  // adaptive filtering
  ihdr.push_back(0);  // no interlace
  push_chunk(out, "IHDR", ihdr);
  push_chunk(out, "IDAT", deflated);
  push_chunk(out, "IEND", {});
  return out;
}

Image decode_png(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kPngSignature, 8) != 0)
    raise(Errc::IoError, "not a PNG stream");

  std::size_t pos = 8;
  std::uint32_t width = 0, height = 0;
  bool have_header = false;
  std::vector<std::uint8_t> compressed;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t len = read_u32_be(bytes.data() + pos);
    if (pos + 12 + len > bytes.size()) raise(Errc::IoError, "truncated PNG chunk");
    const char* type = reinterpret_cast<const char*>(bytes.data() + pos + 4);
    const std::uint8_t* data = bytes.data() + pos + 8;
    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) raise(Errc::IoError, "malformed PNG header");
      width = read_u32_be(data);
      height = read_u32_be(data + 4);
      if (data[8] != 8 || data[9] != 2 || data[12] != 0)
        raise(Errc::IoError, "only 8-bit non-interlaced RGB images are supported");
      have_header = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      compressed.insert(compressed.end(), data, data + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    pos += 12 + len;
  }
  if (!have_header || width == 0 || height == 0) raise(Errc::IoError, "PNG header missing");

  const std::size_t stride = 3 * std::size_t(width);
  auto expected = uLongf((stride + 1) * height);
  std::vector<std::uint8_t> raw(expected);
  if (::uncompress(raw.data(), &expected, compressed.data(), uLong(compressed.size())) != Z_OK ||
      expected != raw.size())
    raise(Errc::IoError, "inflate failed while decoding image");

  Image img;
  img.width = width;
  img.height = height;
  img.pixels.resize(stride * height);
  for (std::size_t y = 0; y < height; ++y) {
    const std::uint8_t filter = raw[y * (stride + 1)];
    const std::uint8_t* line = raw.data() + y * (stride + 1) + 1;
    std::uint8_t* cur = img.pixels.data() + y * stride;
    const std::uint8_t* up = y > 0 ? img.pixels.data() + (y - 1) * stride : nullptr;
    for (std::size_t i = 0; i < stride; ++i) {
      const int left = i >= 3 ? cur[i - 3] : 0;
      const int above = up ? up[i] : 0;
      const int corner = (up && i >= 3) ? up[i - 3] : 0;
      int v = line[i];
      switch (filter) {
        case 0: break;
        case 1: v += left; break;
        case 2: v += above; break;
        case 3: v += (left + above) / 2; break;
        case 4: v += paeth(left, above, corner); break;
        default: raise(Errc::IoError, "unknown PNG filter type");
      }
      cur[i] = std::uint8_t(v);
    }
  }
  return img;
}

void write_png(const std::string& path, const Image& img) {
  const auto bytes = encode_png(img);
  write_file(path, std::string(bytes.begin(), bytes.end()));
}

Image read_png(const std::string& path) {
  const auto text = read_file(path);
  return decode_png(std::vector<std::uint8_t>(text.begin(), text.end()));
}

void write_matrix_csv(const std::string& path, const Scalogram& sg) {
  std::string out;
  for (std::size_t s = 0; s < sg.scales.size(); ++s) {
    for (std::size_t b = 0; b < sg.width; ++b) {
      if (b) out += ',';
      out += fmt_num(sg.at(s, b));
    }
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace ramanwt
