#include "ramanwt/demo.hpp"

#include <cstdlib>

#include "ramanwt/error.hpp"
#include "ramanwt/rng.hpp"

namespace ramanwt {

namespace {

constexpr double kGridLo = 100.0;   // cm^-1
constexpr double kGridHi = 1200.0;  // cm^-1

struct Profile {
  const char* name;
  std::vector<LorentzPeak> peaks;  // {center, width, height}
};

// Peak positions are loosely modeled on published band tables for the five
// minerals; heights and widths are invented.
const std::vector<Profile>& profiles() {
  static const std::vector<Profile> p = {
      {"Actinolite",
       {{225, 9, 0.55}, {370, 10, 0.65}, {530, 12, 0.30}, {670, 8, 1.00}, {930, 11, 0.45}, {1060, 12, 0.35}}},
      {"Albite",
       {{290, 10, 0.40}, {408, 11, 0.30}, {479, 8, 0.70}, {508, 7, 1.00}, {760, 12, 0.25}, {815, 12, 0.30}, {1100, 14, 0.35}}},
      {"Forsterite",
       {{304, 11, 0.30}, {434, 12, 0.35}, {608, 13, 0.25}, {824, 8, 0.95}, {856, 8, 1.00}, {965, 10, 0.40}}},
      {"Grossular",
       {{246, 10, 0.35}, {370, 9, 0.75}, {550, 10, 0.55}, {630, 12, 0.30}, {880, 9, 1.00}, {1008, 10, 0.45}}},
      {"Marialite",
       {{264, 11, 0.35}, {458, 9, 0.85}, {537, 10, 0.60}, {775, 11, 0.50}, {1003, 12, 1.00}, {1115, 13, 0.30}}},
  };
  return p;
}

std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::vector<std::string> demo_class_names() {
  std::vector<std::string> names;
  for (const auto& p : profiles()) names.push_back(p.name);
  return names;
}

std::vector<LorentzPeak> demo_profile(const std::string& class_name, std::uint64_t variant) {
  const Profile* base = nullptr;
  for (const auto& p : profiles())
    if (class_name == p.name) base = &p;
  if (!base) raise(Errc::InvalidArgument, "unknown demo profile '" + class_name + "'");

  Rng rng(derive_seed(name_hash(class_name), variant));
  std::vector<LorentzPeak> peaks;
  for (const auto& p : base->peaks) {
    LorentzPeak q = p;
    q.center += rng.uniform(-4.0, 4.0);
    q.width *= rng.uniform(0.85, 1.2);
    q.height *= rng.uniform(0.75, 1.3);
    peaks.push_back(q);
  }
  // a couple of weak extra bands, as real footprints of one material differ
  const int extras = int(rng.uniform_int(0, 2));
  for (int k = 0; k < extras; ++k)
    peaks.push_back({rng.uniform(kGridLo + 50, kGridHi - 50), rng.uniform(8, 18), rng.uniform(0.04, 0.12)});
  return peaks;
}

Spectrum demo_spectrum(const std::string& class_name, std::uint64_t variant,
                       std::size_t grid_length) {
  Spectrum s = synth_lorentzian(demo_profile(class_name, variant),
                                linspace(kGridLo, kGridHi, grid_length));
  s.label = class_name;
  s.source_id = "synth:" + class_name + ":" + std::to_string(variant);
  return s;
}

DatasetManifest demo_manifest(int variants_per_class) {
  if (variants_per_class < 1) raise(Errc::InvalidArgument, "variants_per_class must be >= 1");
  DatasetManifest m;
  m.class_names = demo_class_names();
  for (const auto& cls : m.class_names) {
    for (int v = 0; v < variants_per_class; ++v) {
      for (Split split : {Split::Train, Split::Test}) {
        ManifestEntry e;
        e.source = "synth:" + cls + ":" + std::to_string(v);
        e.id = cls + "-" + std::to_string(v) + "-" + to_string(split);
        e.label = cls;
        e.split = split;
        m.entries.push_back(std::move(e));
      }
    }
  }
  m.validate();
  return m;
}

Spectrum resolve_source(const ManifestEntry& entry, const std::string& base_dir,
                        std::size_t grid_length) {
  Spectrum s;
  if (entry.source.rfind("synth:", 0) == 0) {
    const auto rest = entry.source.substr(6);
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos)
      raise(Errc::SchemaError, "bad generator spec '" + entry.source + "'");
    const std::string cls = rest.substr(0, colon);
    char* end = nullptr;
    const auto variant = std::strtoull(rest.c_str() + colon + 1, &end, 10);
    if (*end != '\0')
      raise(Errc::SchemaError, "bad variant in generator spec '" + entry.source + "'");
    s = demo_spectrum(cls, variant, grid_length);
  } else {
    std::string path = entry.source;
    if (!base_dir.empty() && path.front() != '/') path = base_dir + "/" + path;
    s = parse_rruff_file(path);
  }
  s.label = entry.label;
  if (s.size() != grid_length) s = resample(s, grid_length);
  return normalize(s);
}

}  // namespace ramanwt
