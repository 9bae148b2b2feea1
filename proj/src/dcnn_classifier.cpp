#include "ramanwt/dcnn_classifier.hpp"

#include <cmath>
#include <cstring>

namespace ramanwt {

namespace {

constexpr char kMagic[4] = {'R', 'W', 'D', 'C'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

DcnnClassifier::DcnnClassifier(const dcnn::DcnnConfig& cfg) : cfg_(cfg), net_(cfg) {
  net_.set_training(false);
}

dcnn::Tensor<float> DcnnClassifier::to_tensor(const std::vector<Image>& images,
                                              std::size_t side) {
  if (images.empty()) raise(Errc::EmptyInput, "no images to convert");
  dcnn::Tensor<float> out(images.size(), 3, side, side);
  for (std::size_t i = 0; i < images.size(); ++i) {
    const Image& img = images[i];
    if (img.width != side || img.height != side)
      raise(Errc::ShapeMismatch,
            "expected a " + std::to_string(side) + "x" + std::to_string(side) + " image",
            std::int64_t(i));
    float* dst = out.sample(i);
    const std::size_t plane = side * side;
    for (std::size_t p = 0; p < plane; ++p) {
      const std::uint8_t* px = img.pixels.data() + 3 * p;
      dst[p] = float(px[0]) / 255.0f;
      dst[plane + p] = float(px[1]) / 255.0f;
      dst[2 * plane + p] = float(px[2]) / 255.0f;
    }
  }
  return out;
}

std::vector<double> DcnnClassifier::predict_proba(const Image& img) const {
  auto x = to_tensor({img}, cfg_.input_side);
  const std::size_t plane = cfg_.input_side * cfg_.input_side;
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t p = 0; p < plane; ++p) x.data[c * plane + p] -= means_[c];

  auto& net = const_cast<dcnn::Network<float>&>(net_);
  const auto logits = net.forward(x);
  std::vector<double> proba(cfg_.n_classes);
  double top = logits.data[0];
  for (std::size_t c = 1; c < cfg_.n_classes; ++c) top = std::max(top, double(logits.data[c]));
  double denom = 0.0;
  for (std::size_t c = 0; c < cfg_.n_classes; ++c) {
    proba[c] = std::exp(double(logits.data[c]) - top);
    denom += proba[c];
  }
  for (auto& p : proba) p /= denom;
  return proba;
}

std::size_t DcnnClassifier::predict(const Image& img) const {
  const auto p = predict_proba(img);
  std::size_t best = 0;
  for (std::size_t c = 1; c < p.size(); ++c)
    if (p[c] > p[best]) best = c;
  return best;
}

std::vector<std::size_t> DcnnClassifier::predict_all(const std::vector<Image>& images) const {
  std::vector<std::size_t> out(images.size());
  const std::size_t chunk = 64;
  auto& net = const_cast<dcnn::Network<float>&>(net_);
  const std::size_t plane = cfg_.input_side * cfg_.input_side;
  for (std::size_t at = 0; at < images.size(); at += chunk) {
    const std::size_t count = std::min(chunk, images.size() - at);
    std::vector<Image> slice(images.begin() + std::ptrdiff_t(at),
                             images.begin() + std::ptrdiff_t(at + count));
    auto x = to_tensor(slice, cfg_.input_side);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t c = 0; c < 3; ++c) {
        float* dst = x.sample(i) + c * plane;
        for (std::size_t p = 0; p < plane; ++p) dst[p] -= means_[c];
      }
    const auto logits = net.forward(x);
    for (std::size_t i = 0; i < count; ++i) {
      const float* row = logits.sample(i);
      std::size_t best = 0;
      for (std::size_t c = 1; c < cfg_.n_classes; ++c)
        if (row[c] > row[best]) best = c;
      out[at + i] = best;
    }
  }
  return out;
}

void DcnnClassifier::save(const std::string& path) const {
  BinWriter w;
  w.bytes(kMagic, 4);
  w.u32(kVersion);
  w.str(cfg_.to_json());
  for (float m : means_) w.f32(m);
  const_cast<dcnn::Network<float>&>(net_).save_buffers(w);
  w.to_file(path);
}

DcnnClassifier DcnnClassifier::load(const std::string& path) {
  const std::string blob = read_file(path);
  BinReader r(blob);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    raise(Errc::IoError, "'" + path + "' is not a saved network");
  const auto version = r.u32();
  if (version != kVersion)
    raise(Errc::IoError, "unsupported network version " + std::to_string(version));
  DcnnClassifier model(dcnn::DcnnConfig::from_json(r.str()));
  for (auto& m : model.means_) m = r.f32();
  model.net_.load_buffers(r);
  model.net_.set_training(false);
  return model;
}

struct DcnnTrainAccess {
  static void set_means(DcnnClassifier& model, const std::array<float, 3>& means) {
    model.means_ = means;
  }
};

DcnnTrainOutput dcnn_train(const std::vector<Image>& images,
                           const std::vector<std::size_t>& labels, const dcnn::DcnnConfig& cfg,
                           const dcnn::TrainerOptions& opts,
                           const std::function<void(const dcnn::EpochStats&)>& on_epoch) {
  auto x = DcnnClassifier::to_tensor(images, cfg.input_side);

  std::array<float, 3> means{0.0f, 0.0f, 0.0f};
  const std::size_t plane = cfg.input_side * cfg.input_side;
  for (std::size_t c = 0; c < 3; ++c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.n; ++i) {
      const float* src = x.sample(i) + c * plane;
      for (std::size_t p = 0; p < plane; ++p) acc += src[p];
    }
    means[c] = float(acc / double(x.n * plane));
    for (std::size_t i = 0; i < x.n; ++i) {
      float* dst = x.sample(i) + c * plane;
      for (std::size_t p = 0; p < plane; ++p) dst[p] -= means[c];
    }
  }

  DcnnTrainOutput out{DcnnClassifier(cfg), {}};
  DcnnTrainAccess::set_means(out.model, means);
  out.model.network().init(derive_seed(opts.seed, 0x696e6974));
  out.stats = dcnn::train(out.model.network(), x, labels, opts, on_epoch);
  return out;
}

}  // namespace ramanwt
