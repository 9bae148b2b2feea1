#pragma once

#include <string>
#include <vector>

#include "ramanwt/dcnn/layers.hpp"
#include "ramanwt/serialize.hpp"

namespace ramanwt::dcnn {

enum class SkipMode { None, Add, Concat };

const char* to_string(SkipMode mode);
SkipMode skip_mode_from_string(const std::string& s);

struct DcnnConfig {
  std::size_t input_side = 64;
  std::size_t n_classes = 2;
  std::size_t channels = 64;
  std::size_t fc1 = 256;
  std::size_t fc2 = 64;
  SkipMode skip = SkipMode::Add;
  bool bn_affine = true;

  // The stack halves the spatial side three times, so the input must divide
  // evenly and leave at least one pixel per plane.
  void shape_check() const;
  std::size_t merged_channels() const {
    return skip == SkipMode::Concat ? 2 * channels : channels;
  }
  std::size_t flat_features() const {
    const std::size_t side = input_side / 8;
    return merged_channels() * side * side;
  }

  std::string to_json() const;
  static DcnnConfig from_json(const std::string& text);
};

// Convolutional classifier: a strided 7x7 stem, two 3x3 blocks with a skip
// connection around them, then three dense layers. Templated on the scalar so
// training runs in float and numeric checks in double.
template <class T>
class Network {
 public:
  explicit Network(const DcnnConfig& cfg)
      : cfg_(cfg),
        conv1_(3, cfg.channels, 7, 2, 3),
        bn1_(cfg.channels, T(1e-5), T(0.1), cfg.bn_affine),
        conv2_(cfg.channels, cfg.channels, 3, 1, 1),
        bn2_(cfg.channels, T(1e-5), T(0.1), cfg.bn_affine),
        conv3_(cfg.channels, cfg.channels, 3, 1, 1),
        bn3_(cfg.channels, T(1e-5), T(0.1), cfg.bn_affine),
        fc1_(cfg.flat_features(), cfg.fc1),
        fc2_(cfg.fc1, cfg.fc2),
        fc3_(cfg.fc2, cfg.n_classes) {
    cfg.shape_check();
  }

  const DcnnConfig& config() const { return cfg_; }

  void init(std::uint64_t seed) {
    Rng rng(seed);
    conv1_.init(rng);
    conv2_.init(rng);
    conv3_.init(rng);
    fc1_.init(rng);
    fc2_.init(rng);
    fc3_.init(rng);
  }

  void set_training(bool training) {
    training_ = training;
    bn1_.set_training(training);
    bn2_.set_training(training);
    bn3_.set_training(training);
  }

  Tensor<T> forward(const Tensor<T>& x) {
    x.require_shape(x.n, 3, cfg_.input_side, cfg_.input_side, "network input");
    Tensor<T> a = pool1_.forward(relu1_.forward(bn1_.forward(conv1_.forward(x))));
    Tensor<T> b = relu3_.forward(
        bn3_.forward(conv3_.forward(relu2_.forward(bn2_.forward(conv2_.forward(a))))));

    Tensor<T> merged;
    switch (cfg_.skip) {
      case SkipMode::None:
        merged = std::move(b);
        break;
      case SkipMode::Add:
        merged = std::move(b);
        for (std::size_t i = 0; i < merged.size(); ++i) merged.data[i] += a.data[i];
        break;
      case SkipMode::Concat: {
        merged = Tensor<T>(b.n, 2 * b.c, b.h, b.w);
        const std::size_t half = b.per_sample();
        for (std::size_t i = 0; i < b.n; ++i) {
          std::copy(b.sample(i), b.sample(i) + half, merged.sample(i));
          std::copy(a.sample(i), a.sample(i) + half, merged.sample(i) + half);
        }
        break;
      }
    }
    Tensor<T> p = pool2_.forward(merged);
    Tensor<T> flat(p.n, p.per_sample(), 1, 1);
    flat.data = std::move(p.data);
    return fc3_.forward(relu5_.forward(fc2_.forward(relu4_.forward(fc1_.forward(flat)))));
  }

  Tensor<T> backward(const Tensor<T>& dlogits) {
    Tensor<T> d = fc1_.backward(relu4_.backward(fc2_.backward(relu5_.backward(fc3_.backward(dlogits)))));

    const std::size_t side = cfg_.input_side / 8;
    Tensor<T> dpool(d.n, cfg_.merged_channels(), side, side);
    dpool.data = std::move(d.data);
    Tensor<T> dmerged = pool2_.backward(dpool);

    Tensor<T> db, da_skip;
    switch (cfg_.skip) {
      case SkipMode::None:
        db = std::move(dmerged);
        break;
      case SkipMode::Add:
        db = dmerged;
        da_skip = std::move(dmerged);
        break;
      case SkipMode::Concat: {
        db = Tensor<T>(dmerged.n, cfg_.channels, dmerged.h, dmerged.w);
        da_skip = Tensor<T>(dmerged.n, cfg_.channels, dmerged.h, dmerged.w);
        const std::size_t half = db.per_sample();
        for (std::size_t i = 0; i < dmerged.n; ++i) {
          std::copy(dmerged.sample(i), dmerged.sample(i) + half, db.sample(i));
          std::copy(dmerged.sample(i) + half, dmerged.sample(i) + 2 * half, da_skip.sample(i));
        }
        break;
      }
    }

    Tensor<T> da = conv2_.backward(bn2_.backward(relu2_.backward(
        conv3_.backward(bn3_.backward(relu3_.backward(db))))));
    if (cfg_.skip != SkipMode::None)
      for (std::size_t i = 0; i < da.size(); ++i) da.data[i] += da_skip.data[i];
    return conv1_.backward(bn1_.backward(relu1_.backward(pool1_.backward(da))));
  }

  std::vector<ParamRef<T>> params() {
    std::vector<ParamRef<T>> out;
    conv1_.collect(out);
    bn1_.collect(out);
    conv2_.collect(out);
    bn2_.collect(out);
    conv3_.collect(out);
    bn3_.collect(out);
    fc1_.collect(out);
    fc2_.collect(out);
    fc3_.collect(out);
    return out;
  }

  void zero_grad() {
    for (auto& p : params()) std::fill(p.grad->begin(), p.grad->end(), T(0));
  }

  // Every persistent buffer in a fixed order: parameters plus normalization
  // running statistics.
  std::vector<std::vector<T>*> buffers() {
    std::vector<std::vector<T>*> out;
    for (auto& p : params()) out.push_back(p.value);
    for (auto* bn : {&bn1_, &bn2_, &bn3_}) {
      out.push_back(&bn->running_mean());
      out.push_back(&bn->running_var());
      if (!cfg_.bn_affine) {
        out.push_back(&bn->gamma());
        out.push_back(&bn->beta());
      }
    }
    return out;
  }

  void save_buffers(BinWriter& w) {
    const auto bufs = buffers();
    w.u64(bufs.size());
    for (const auto* b : bufs) w.vec(*b);
  }

  void load_buffers(BinReader& r) {
    auto bufs = buffers();
    if (r.u64() != bufs.size()) raise(Errc::IoError, "saved network layout mismatch");
    for (auto* b : bufs) {
      auto loaded = r.vec<T>();
      if (loaded.size() != b->size()) raise(Errc::IoError, "saved network layout mismatch");
      *b = std::move(loaded);
    }
  }

 private:
  DcnnConfig cfg_;
  bool training_ = true;
  Conv2d<T> conv1_;
  BatchNorm2d<T> bn1_;
  Relu<T> relu1_;
  MaxPool2d<T> pool1_;
  Conv2d<T> conv2_;
  BatchNorm2d<T> bn2_;
  Relu<T> relu2_;
  Conv2d<T> conv3_;
  BatchNorm2d<T> bn3_;
  Relu<T> relu3_;
  MaxPool2d<T> pool2_;
  Linear<T> fc1_;
  Relu<T> relu4_;
  Linear<T> fc2_;
  Relu<T> relu5_;
  Linear<T> fc3_;
};

}  // namespace ramanwt::dcnn
