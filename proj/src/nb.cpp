#include <algorithm>
#include <cmath>

#include "ramanwt/error.hpp"
#include "ramanwt/ml.hpp"
#include "ramanwt/rng.hpp"

namespace ramanwt {

namespace {

class NbModel final : public MlModel {
 public:
  NbModel(std::size_t n_classes, std::size_t n_features) {
    n_classes_ = n_classes;
    n_features_ = n_features;
  }
  const char* kind() const override { return "nb"; }

  std::vector<double> predict_proba(const std::vector<double>& x) const override {
    if (x.size() != n_features_)
      raise(Errc::ShapeMismatch, "feature count differs from what the model was trained on");
    std::vector<double> logp(n_classes_);
    for (std::size_t c = 0; c < n_classes_; ++c) {
      double acc = std::log(priors_[c]);
      const double* mu = means_.data() + c * n_features_;
      const double* var = variances_.data() + c * n_features_;
      for (std::size_t d = 0; d < n_features_; ++d) {
        const double diff = x[d] - mu[d];
        acc += -0.5 * std::log(2.0 * kPi * var[d]) - diff * diff / (2.0 * var[d]);
      }
      logp[c] = acc;
    }
    const double top = *std::max_element(logp.begin(), logp.end());
    double total = 0.0;
    for (auto& v : logp) {
      v = std::exp(v - top);
      total += v;
    }
    for (auto& v : logp) v /= total;
    return logp;
  }

  std::vector<double> priors_;
  std::vector<double> means_;      // n_classes x n_features
  std::vector<double> variances_;  // n_classes x n_features

 private:
  void save_payload(BinWriter& w) const override {
    w.vec(priors_);
    w.vec(means_);
    w.vec(variances_);
  }
};

}  // namespace

std::unique_ptr<MlModel> nb_fit(const FeatureMatrix& train, std::size_t n_classes,
                                const NbParams& params) {
  if (n_classes < 2) raise(Errc::InvalidArgument, "need at least two classes");
  train.validate(n_classes);
  if (train.labels.empty()) raise(Errc::EmptyTrainingSet, "training data carries no labels");

  const std::size_t d = train.cols;
  auto model = std::make_unique<NbModel>(n_classes, d);
  std::vector<std::size_t> counts(n_classes, 0);
  std::vector<double> means(n_classes * d, 0.0), variances(n_classes * d, 0.0);

  for (std::size_t i = 0; i < train.rows; ++i) {
    ++counts[train.labels[i]];
    const double* x = train.row(i);
    double* mu = means.data() + train.labels[i] * d;
    for (std::size_t k = 0; k < d; ++k) mu[k] += x[k];
  }
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (counts[c] == 0)
      raise(Errc::EmptyClass, "class " + std::to_string(c) + " has no training samples");
    for (std::size_t k = 0; k < d; ++k) means[c * d + k] /= double(counts[c]);
  }
  for (std::size_t i = 0; i < train.rows; ++i) {
    const double* x = train.row(i);
    const double* mu = means.data() + train.labels[i] * d;
    double* var = variances.data() + train.labels[i] * d;
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = x[k] - mu[k];
      var[k] += diff * diff;
    }
  }

  // Floor the variances relative to the widest feature spread so features
  // that are constant within a class still produce finite likelihoods.
  double global_max_var = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    double mean = 0.0;
    for (std::size_t i = 0; i < train.rows; ++i) mean += train.row(i)[k];
    mean /= double(train.rows);
    double var = 0.0;
    for (std::size_t i = 0; i < train.rows; ++i) {
      const double diff = train.row(i)[k] - mean;
      var += diff * diff;
    }
    global_max_var = std::max(global_max_var, var / double(train.rows));
  }
  const double floor = std::max(params.variance_floor_rel * global_max_var, 1e-300);
  for (std::size_t c = 0; c < n_classes; ++c)
    for (std::size_t k = 0; k < d; ++k) {
      double& var = variances[c * d + k];
      var = std::max(var / double(counts[c]), floor);
    }

  model->priors_.resize(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c)
    model->priors_[c] = double(counts[c]) / double(train.rows);
  model->means_ = std::move(means);
  model->variances_ = std::move(variances);
  return model;
}

namespace detail {

std::unique_ptr<MlModel> nb_load(BinReader& r, std::size_t n_classes, std::size_t n_features) {
  auto model = std::make_unique<NbModel>(n_classes, n_features);
  model->priors_ = r.vec<double>();
  model->means_ = r.vec<double>();
  model->variances_ = r.vec<double>();
  if (model->priors_.size() != n_classes || model->means_.size() != n_classes * n_features ||
      model->variances_.size() != n_classes * n_features)
    raise(Errc::IoError, "saved model has inconsistent dimensions");
  return model;
}

}  // namespace detail

}  // namespace ramanwt
