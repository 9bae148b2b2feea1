#include <algorithm>
#include <set>
#include <string>

#include <doctest.h>

#include "ramanwt/demo.hpp"
#include "ramanwt/error.hpp"
#include "ramanwt/serialize.hpp"
#include "test_util.hpp"

using namespace ramanwt;

TEST_CASE("demo classes are five distinct names") {
  const auto names = demo_class_names();
  REQUIRE(names.size() == 5);
  CHECK(std::set<std::string>(names.begin(), names.end()).size() == 5);
}

TEST_CASE("demo profiles are deterministic and vary across variants") {
  const auto names = demo_class_names();
  const auto a = demo_profile(names[0], 0);
  const auto b = demo_profile(names[0], 0);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].center == b[i].center);
    CHECK(a[i].width == b[i].width);
    CHECK(a[i].height == b[i].height);
  }

  const auto c = demo_profile(names[0], 1);
  bool differs = a.size() != c.size();
  for (std::size_t i = 0; !differs && i < a.size(); ++i) differs = a[i].center != c[i].center;
  CHECK(differs);

  CHECK_THROWS_AS(demo_profile("unobtainium", 0), Error);
}

TEST_CASE("demo spectra are normalized onto the requested grid") {
  const auto names = demo_class_names();
  const Spectrum s = demo_spectrum(names[2], 3, 300);
  REQUIRE(s.size() == 300);
  CHECK_NOTHROW(s.validate());
  CHECK(*std::max_element(s.intensities.begin(), s.intensities.end()) == 1.0);
  CHECK(*std::min_element(s.intensities.begin(), s.intensities.end()) == 0.0);
  CHECK(s.label == names[2]);
}

TEST_CASE("demo manifest pairs every variant with a train and a test entry") {
  const DatasetManifest m = demo_manifest(3);
  CHECK(m.class_names.size() == 5);
  CHECK(m.entries.size() == 5 * 3 * 2);
  CHECK_NOTHROW(m.validate());

  int train = 0, test = 0;
  for (const auto& e : m.entries) (e.split == Split::Train ? train : test)++;
  CHECK(train == 15);
  CHECK(test == 15);

  CHECK_THROWS_AS(demo_manifest(0), Error);
}

TEST_CASE("resolve_source expands generator specs") {
  ManifestEntry e;
  e.id = "x";
  e.source = "synth:" + demo_class_names()[1] + ":2";
  e.label = "mylabel";
  const Spectrum s = resolve_source(e, "", 256);
  REQUIRE(s.size() == 256);
  CHECK(s.label == "mylabel");

  ManifestEntry bad = e;
  bad.source = "synth:nosuchthing";
  CHECK_THROWS_AS(resolve_source(bad, "", 256), Error);
  bad.source = "synth:" + demo_class_names()[1] + ":abc";
  CHECK_THROWS_AS(resolve_source(bad, "", 256), Error);
}

TEST_CASE("resolve_source reads files relative to the base directory") {
  testing::TempDir dir;
  const Spectrum demo = demo_spectrum(demo_class_names()[0], 0, 64);
  write_file(dir / "spec.txt", serialize_rruff(demo));

  ManifestEntry e;
  e.id = "f";
  e.source = "spec.txt";
  e.label = "filed";
  const Spectrum s = resolve_source(e, dir.str(), 128);
  REQUIRE(s.size() == 128);
  CHECK(s.label == "filed");
  CHECK(s.wavenumbers.front() == demo.wavenumbers.front());
  CHECK(s.wavenumbers.back() == demo.wavenumbers.back());

  ManifestEntry missing = e;
  missing.source = "nope.txt";
  CHECK_THROWS_AS(resolve_source(missing, dir.str(), 128), Error);
}
