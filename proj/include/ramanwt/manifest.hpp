#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ramanwt {

enum class Split : std::uint8_t { Train, Test };
enum class Scenario : std::uint8_t { Clean, GN, BB, GB };

const char* to_string(Split s);
const char* to_string(Scenario s);
Split split_from_string(const std::string& s);
Scenario scenario_from_string(const std::string& s);

// One labeled source signal plus (optionally) a pinned noise realization.
// `source` is either a path to an RRUFF text file or a generator spec of the
// form "synth:<profile>:<variant>".
struct ManifestEntry {
  std::string id;
  std::string source;
  std::string label;
  Split split = Split::Train;
  std::optional<Scenario> scenario;
  std::optional<double> snr_db;
  std::optional<std::uint64_t> seed;
};

struct DatasetManifest {
  std::vector<std::string> class_names;  // ordered, >= 2
  std::vector<ManifestEntry> entries;

  // -1 when the label is not a class name
  int label_index(const std::string& label) const;

  // SchemaError carrying the offending entry index: unknown label,
  // duplicate id, fewer than two classes.
  void validate() const;
};

DatasetManifest manifest_from_json(const std::string& text);
std::string manifest_to_json(const DatasetManifest& m);

DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& m, const std::string& path);

}  // namespace ramanwt
