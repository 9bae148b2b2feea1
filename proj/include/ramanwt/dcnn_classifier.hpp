#pragma once

#include <array>
#include <string>
#include <vector>

#include "ramanwt/dcnn/network.hpp"
#include "ramanwt/dcnn/trainer.hpp"
#include "ramanwt/image.hpp"

namespace ramanwt {

// Image-level front end for the convolutional network: channels are scaled to
// [0, 1] and centered with per-channel means measured on the training set.
class DcnnClassifier {
 public:
  explicit DcnnClassifier(const dcnn::DcnnConfig& cfg);

  std::vector<double> predict_proba(const Image& img) const;
  std::size_t predict(const Image& img) const;
  std::vector<std::size_t> predict_all(const std::vector<Image>& images) const;

  void save(const std::string& path) const;
  static DcnnClassifier load(const std::string& path);

  const dcnn::DcnnConfig& config() const { return cfg_; }
  dcnn::Network<float>& network() { return net_; }
  const std::array<float, 3>& channel_means() const { return means_; }

  // Scaled (not yet centered) NCHW batch; every image must already be
  // side x side.
  static dcnn::Tensor<float> to_tensor(const std::vector<Image>& images, std::size_t side);

 private:
  friend struct DcnnTrainAccess;
  dcnn::DcnnConfig cfg_;
  dcnn::Network<float> net_;
  std::array<float, 3> means_{0.0f, 0.0f, 0.0f};
};

struct DcnnTrainOutput {
  DcnnClassifier model;
  dcnn::TrainResult stats;
};

DcnnTrainOutput dcnn_train(const std::vector<Image>& images,
                           const std::vector<std::size_t>& labels, const dcnn::DcnnConfig& cfg,
                           const dcnn::TrainerOptions& opts,
                           const std::function<void(const dcnn::EpochStats&)>& on_epoch = {});

}  // namespace ramanwt
