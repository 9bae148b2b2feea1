#include <json.hpp>

#include "ramanwt/dcnn/network.hpp"
#include "ramanwt/error.hpp"

namespace ramanwt::dcnn {

const char* to_string(SkipMode mode) {
  switch (mode) {
    case SkipMode::None: return "none";
    case SkipMode::Add: return "add";
    case SkipMode::Concat: return "concat";
  }
  raise(Errc::InvalidArgument, "unknown skip mode");
}

SkipMode skip_mode_from_string(const std::string& s) {
  if (s == "none") return SkipMode::None;
  if (s == "add") return SkipMode::Add;
  if (s == "concat") return SkipMode::Concat;
  raise(Errc::InvalidArgument, "unknown skip mode '" + s + "'");
}

void DcnnConfig::shape_check() const {
  if (n_classes < 2) raise(Errc::InvalidArgument, "need at least two classes");
  if (channels == 0 || fc1 == 0 || fc2 == 0)
    raise(Errc::InvalidArgument, "layer widths must be positive");
  if (input_side < 16 || input_side % 8 != 0)
    raise(Errc::ShapeMismatch,
          "input side must be a multiple of 8 and at least 16, got " +
              std::to_string(input_side));
}

std::string DcnnConfig::to_json() const {
  nlohmann::json j;
  j["input_side"] = input_side;
  j["n_classes"] = n_classes;
  j["channels"] = channels;
  j["fc1"] = fc1;
  j["fc2"] = fc2;
  j["skip"] = to_string(skip);
  j["bn_affine"] = bn_affine;
  return j.dump();
}

DcnnConfig DcnnConfig::from_json(const std::string& text) {
  DcnnConfig cfg;
  try {
    const auto j = nlohmann::json::parse(text);
    cfg.input_side = j.at("input_side").get<std::size_t>();
    cfg.n_classes = j.at("n_classes").get<std::size_t>();
    cfg.channels = j.at("channels").get<std::size_t>();
    cfg.fc1 = j.at("fc1").get<std::size_t>();
    cfg.fc2 = j.at("fc2").get<std::size_t>();
    cfg.skip = skip_mode_from_string(j.at("skip").get<std::string>());
    cfg.bn_affine = j.at("bn_affine").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::SchemaError, std::string("bad network config: ") + e.what());
  }
  cfg.shape_check();
  return cfg;
}

}  // namespace ramanwt::dcnn
