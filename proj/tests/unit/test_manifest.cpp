#include <string>

#include <doctest.h>

#include "ramanwt/error.hpp"
#include "ramanwt/manifest.hpp"
#include "test_util.hpp"

using namespace ramanwt;

namespace {

DatasetManifest small_manifest() {
  DatasetManifest m;
  m.class_names = {"alpha", "beta"};
  ManifestEntry a;
  a.id = "a1";
  a.source = "synth:calcite:0";
  a.label = "alpha";
  a.split = Split::Train;
  ManifestEntry b;
  b.id = "b1";
  b.source = "synth:quartz:1";
  b.label = "beta";
  b.split = Split::Test;
  b.scenario = Scenario::GN;
  b.snr_db = 12.5;
  b.seed = 99;
  m.entries = {a, b};
  return m;
}

}  // namespace

TEST_CASE("split and scenario names round-trip, unknown ones throw") {
  CHECK(split_from_string("train") == Split::Train);
  CHECK(split_from_string("test") == Split::Test);
  CHECK(std::string(to_string(Split::Test)) == "test");
  CHECK_THROWS_AS(split_from_string("Train"), Error);

  for (auto sc : {Scenario::Clean, Scenario::GN, Scenario::BB, Scenario::GB})
    CHECK(scenario_from_string(to_string(sc)) == sc);
  CHECK_THROWS_AS(scenario_from_string("GB"), Error);
  CHECK_THROWS_AS(scenario_from_string("gauss"), Error);
}

TEST_CASE("manifest json round-trips every field") {
  const DatasetManifest m = small_manifest();
  const DatasetManifest r = manifest_from_json(manifest_to_json(m));
  CHECK(r.class_names == m.class_names);
  REQUIRE(r.entries.size() == 2);
  CHECK(r.entries[0].id == "a1");
  CHECK(!r.entries[0].scenario.has_value());
  CHECK(!r.entries[0].snr_db.has_value());
  CHECK(r.entries[1].split == Split::Test);
  CHECK(r.entries[1].scenario == Scenario::GN);
  CHECK(r.entries[1].snr_db == 12.5);
  CHECK(r.entries[1].seed == 99);
}

TEST_CASE("manifest file save and load round-trip") {
  testing::TempDir dir;
  const std::string path = dir / "manifest.json";
  save_manifest(small_manifest(), path);
  const DatasetManifest r = load_manifest(path);
  CHECK(r.entries.size() == 2);
  CHECK(r.class_names.size() == 2);
}

TEST_CASE("validate flags the offending entry index") {
  DatasetManifest dup = small_manifest();
  dup.entries.push_back(dup.entries[0]);
  try {
    dup.validate();
    FAIL("expected a duplicate id error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SchemaError);
    CHECK(e.index() == 2);
  }

  DatasetManifest bad_label = small_manifest();
  bad_label.entries[1].label = "gamma";
  try {
    bad_label.validate();
    FAIL("expected a label error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SchemaError);
    CHECK(e.index() == 1);
  }

  DatasetManifest one_class = small_manifest();
  one_class.class_names = {"alpha"};
  CHECK_THROWS_AS(one_class.validate(), Error);
}

TEST_CASE("schema violations surface as schema errors, not json exceptions") {
  CHECK_THROWS_AS(manifest_from_json("not json"), Error);
  CHECK_THROWS_AS(manifest_from_json("{}"), Error);
  CHECK_THROWS_AS(manifest_from_json(R"({"class_names": ["a", "b"], "entries": [{}]})"), Error);
  // an empty entry list is structurally fine; emptiness per class is checked
  // when a split is expanded
  CHECK_NOTHROW(manifest_from_json(R"({"class_names": ["a", "b"], "entries": []})"));
}

TEST_CASE("label_index finds classes and rejects strangers") {
  const DatasetManifest m = small_manifest();
  CHECK(m.label_index("alpha") == 0);
  CHECK(m.label_index("beta") == 1);
  CHECK(m.label_index("gamma") == -1);
}
