#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "ramanwt/error.hpp"
#include "ramanwt/image.hpp"
#include "ramanwt/rng.hpp"
#include "ramanwt/serialize.hpp"
#include "test_util.hpp"

using namespace ramanwt;

namespace {

bool px_equals(const Image& img, std::size_t x, std::size_t y,
               const std::array<std::uint8_t, 3>& rgb) {
  const std::uint8_t* p = img.px(x, y);
  return p[0] == rgb[0] && p[1] == rgb[1] && p[2] == rgb[2];
}

Image random_image(std::size_t w, std::size_t h, std::uint64_t seed) {
  Image img;
  img.width = w;
  img.height = h;
  img.pixels.resize(3 * w * h);
  Rng rng(seed);
  for (auto& p : img.pixels) p = std::uint8_t(rng.uniform_int(0, 255));
  return img;
}

}  // namespace

TEST_CASE("the colormap table keeps its frozen anchor entries") {
  CHECK(kColormap[0] == std::array<std::uint8_t, 3>{0, 0, 128});
  CHECK(kColormap[32] == std::array<std::uint8_t, 3>{0, 0, 255});
  CHECK(kColormap[64] == std::array<std::uint8_t, 3>{0, 128, 255});
  CHECK(kColormap[128] == std::array<std::uint8_t, 3>{130, 255, 126});
  CHECK(kColormap[191] == std::array<std::uint8_t, 3>{255, 128, 0});
  CHECK(kColormap[255] == std::array<std::uint8_t, 3>{128, 0, 0});
}

TEST_CASE("rendering maps normalized magnitudes through the colormap") {
  // magnitudes chosen so the normalized positions land exactly on table
  // entries 0, 85, 170 and 255
  Scalogram sg;
  sg.scales = {1.0, 2.0};
  sg.width = 2;
  sg.magnitudes = {0.0, 85.0, 170.0, 255.0};

  RenderOptions opt;
  opt.side = 2;
  opt.log_compress = false;
  std::string warning = "stale";
  const Image img = render_scalogram(sg, opt, &warning);
  CHECK(warning.empty());
  REQUIRE(img.width == 2);
  REQUIRE(img.height == 2);

  // the largest scale is drawn as the top row
  CHECK(px_equals(img, 0, 0, kColormap[170]));
  CHECK(px_equals(img, 1, 0, kColormap[255]));
  CHECK(px_equals(img, 0, 1, kColormap[0]));
  CHECK(px_equals(img, 1, 1, kColormap[85]));
}

TEST_CASE("log compression is applied before normalization") {
  Scalogram sg;
  sg.scales = {1.0, 2.0};
  sg.width = 2;
  // log1p maps {0, e-1, e^2-1, e^2-1} to {0, 1, 2, 2}: positions 0, 1/2, 1
  sg.magnitudes = {0.0, std::exp(1.0) - 1.0, std::exp(2.0) - 1.0, std::exp(2.0) - 1.0};

  RenderOptions opt;
  opt.side = 2;
  const Image img = render_scalogram(sg, opt);
  CHECK(px_equals(img, 0, 1, kColormap[0]));
  CHECK(px_equals(img, 0, 0, kColormap[255]));
  // position 0.5 blends entries 127 and 128 into their midpoint
  CHECK(px_equals(img, 1, 1, {128, 255, 128}));
}

TEST_CASE("a constant scalogram renders flat with a warning") {
  Scalogram sg;
  sg.scales = {1.0, 2.0};
  sg.width = 3;
  sg.magnitudes.assign(6, 4.2);

  RenderOptions opt;
  opt.side = 3;
  std::string warning;
  const Image img = render_scalogram(sg, opt, &warning);
  CHECK(warning == "constant scalogram, rendered without contrast");
  for (std::size_t y = 0; y < 3; ++y)
    for (std::size_t x = 0; x < 3; ++x) CHECK(px_equals(img, x, y, {128, 255, 128}));
}

TEST_CASE("rendering rejects empty input and a zero side") {
  Scalogram sg;
  CHECK_THROWS_AS(render_scalogram(sg), Error);
  sg.scales = {1.0};
  sg.width = 2;
  sg.magnitudes = {1.0, 2.0};
  RenderOptions opt;
  opt.side = 0;
  CHECK_THROWS_AS(render_scalogram(sg, opt), Error);
}

TEST_CASE("bilinear resize aligns corners and averages the interior") {
  Image src;
  src.width = 2;
  src.height = 2;
  src.pixels = {10, 0, 0, 30, 0, 0, 50, 0, 0, 90, 0, 0};

  const Image up = resize_bilinear(src, 3, 3);
  CHECK(up.px(0, 0)[0] == 10);
  CHECK(up.px(2, 0)[0] == 30);
  CHECK(up.px(0, 2)[0] == 50);
  CHECK(up.px(2, 2)[0] == 90);
  CHECK(up.px(1, 0)[0] == 20);   // (10 + 30) / 2
  CHECK(up.px(1, 1)[0] == 45);   // mean of all four
  CHECK(up.px(2, 1)[0] == 60);   // (30 + 90) / 2

  const Image same = resize_bilinear(src, 2, 2);
  CHECK(same.pixels == src.pixels);

  CHECK_THROWS_AS(resize_bilinear(src, 0, 3), Error);
}

TEST_CASE("png encoding round-trips pixels exactly") {
  const Image img = random_image(17, 9, 42);
  const auto bytes = encode_png(img);
  REQUIRE(bytes.size() > 8);
  // PNG signature
  CHECK(bytes[0] == 0x89);
  CHECK(bytes[1] == 'P');
  CHECK(bytes[2] == 'N');
  CHECK(bytes[3] == 'G');

  const Image back = decode_png(bytes);
  CHECK(back.width == img.width);
  CHECK(back.height == img.height);
  CHECK(back.pixels == img.pixels);
}

TEST_CASE("png files round-trip through disk") {
  testing::TempDir dir;
  const Image img = random_image(33, 65, 7);
  const std::string path = dir / "img.png";
  write_png(path, img);
  const Image back = read_png(path);
  CHECK(back.pixels == img.pixels);
}

TEST_CASE("png decoding rejects garbage") {
  CHECK_THROWS_AS(decode_png({1, 2, 3, 4}), Error);
  std::vector<std::uint8_t> bytes = encode_png(random_image(4, 4, 1));
  bytes.resize(bytes.size() / 2);
  CHECK_THROWS_AS(decode_png(bytes), Error);
}

TEST_CASE("matrix csv dumps magnitudes row by row") {
  testing::TempDir dir;
  Scalogram sg;
  sg.scales = {1.0, 2.0};
  sg.width = 3;
  sg.magnitudes = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  const std::string path = dir / "m.csv";
  write_matrix_csv(path, sg);

  const std::string text = read_file(path);
  CHECK(text.find("0.5,1,1.5") != std::string::npos);
  CHECK(text.find("2,2.5,3") != std::string::npos);
}
