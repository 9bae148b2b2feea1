#include "ramanwt/manifest.hpp"

#include <unordered_set>

#include <json.hpp>

#include "ramanwt/error.hpp"
#include "ramanwt/serialize.hpp"

namespace ramanwt {

using nlohmann::json;

const char* to_string(Split s) { return s == Split::Train ? "train" : "test"; }

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::Clean: return "clean";
    case Scenario::GN: return "gn";
    case Scenario::BB: return "bb";
    case Scenario::GB: return "gb";
  }
  return "?";
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "test") return Split::Test;
  raise(Errc::SchemaError, "unknown split '" + s + "'");
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "clean") return Scenario::Clean;
  if (s == "gn") return Scenario::GN;
  if (s == "bb") return Scenario::BB;
  if (s == "gb") return Scenario::GB;
  raise(Errc::SchemaError, "unknown scenario '" + s + "'");
}

int DatasetManifest::label_index(const std::string& label) const {
  for (std::size_t i = 0; i < class_names.size(); ++i)
    if (class_names[i] == label) return int(i);
  return -1;
}

void DatasetManifest::validate() const {
  if (class_names.size() < 2)
    raise(Errc::SchemaError, "manifest needs at least 2 class names");
  std::unordered_set<std::string> names(class_names.begin(), class_names.end());
  if (names.size() != class_names.size())
    raise(Errc::SchemaError, "duplicate class name");
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.id.empty())
      raise(Errc::SchemaError, "entry " + std::to_string(i) + " has empty id", std::int64_t(i));
    if (!ids.insert(e.id).second)
      raise(Errc::SchemaError, "duplicate entry id '" + e.id + "'", std::int64_t(i));
    if (e.source.empty())
      raise(Errc::SchemaError, "entry " + std::to_string(i) + " has empty source", std::int64_t(i));
    if (label_index(e.label) < 0)
      raise(Errc::SchemaError, "entry " + std::to_string(i) + " label '" + e.label +
                                   "' is not a class name", std::int64_t(i));
  }
}

DatasetManifest manifest_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    raise(Errc::SchemaError, std::string("manifest is not valid JSON: ") + e.what());
  }
  DatasetManifest m;
  try {
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    for (const auto& je : j.at("entries")) {
      ManifestEntry e;
      e.id = je.at("id").get<std::string>();
      e.source = je.at("source").get<std::string>();
      e.label = je.at("label").get<std::string>();
      e.split = split_from_string(je.at("split").get<std::string>());
      if (je.contains("scenario"))
        e.scenario = scenario_from_string(je.at("scenario").get<std::string>());
      if (je.contains("snr_db")) e.snr_db = je.at("snr_db").get<double>();
      if (je.contains("seed")) e.seed = je.at("seed").get<std::uint64_t>();
      m.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    raise(Errc::SchemaError, std::string("manifest schema violation: ") + e.what());
  }
  m.validate();
  return m;
}

std::string manifest_to_json(const DatasetManifest& m) {
  json j;
  j["class_names"] = m.class_names;
  j["entries"] = json::array();
  for (const auto& e : m.entries) {
    json je;
    je["id"] = e.id;
    je["source"] = e.source;
    je["label"] = e.label;
    je["split"] = to_string(e.split);
    if (e.scenario) je["scenario"] = to_string(*e.scenario);
    if (e.snr_db) je["snr_db"] = *e.snr_db;
    if (e.seed) je["seed"] = *e.seed;
    j["entries"].push_back(std::move(je));
  }
  return j.dump(2) + "\n";
}

DatasetManifest load_manifest(const std::string& path) {
  return manifest_from_json(read_file(path));
}

void save_manifest(const DatasetManifest& m, const std::string& path) {
  write_file(path, manifest_to_json(m));
}

}  // namespace ramanwt
