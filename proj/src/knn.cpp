#include <algorithm>
#include <cmath>

#include "ramanwt/error.hpp"
#include "ramanwt/ml.hpp"

namespace ramanwt {

namespace {

class KnnModel final : public MlModel {
 public:
  KnnModel(std::size_t n_classes, std::size_t n_features) {
    n_classes_ = n_classes;
    n_features_ = n_features;
  }
  const char* kind() const override { return "knn"; }

  std::vector<double> predict_proba(const std::vector<double>& x) const override {
    std::vector<double> proba(n_classes_, 0.0);
    for (const auto& [dist, label] : neighbors(x)) {
      (void)dist;
      proba[label] += 1.0 / double(k_);
    }
    return proba;
  }

  std::size_t predict(const std::vector<double>& x) const override {
    const auto near = neighbors(x);
    std::vector<std::size_t> votes(n_classes_, 0);
    std::vector<double> summed(n_classes_, 0.0);
    for (const auto& [dist, label] : near) {
      ++votes[label];
      summed[label] += dist;
    }
    // Most votes wins; vote ties go to the class whose voters sit closer,
    // and exact distance ties to the lower index.
    std::size_t best = 0;
    for (std::size_t c = 1; c < n_classes_; ++c) {
      if (votes[c] > votes[best] || (votes[c] == votes[best] && summed[c] < summed[best])) best = c;
    }
    return best;
  }

  std::size_t k_ = 5;
  std::vector<double> points_;        // rows x n_features
  std::vector<std::uint64_t> labels_;

 private:
  std::vector<std::pair<double, std::size_t>> neighbors(const std::vector<double>& x) const {
    if (x.size() != n_features_)
      raise(Errc::ShapeMismatch, "feature count differs from what the model was trained on");
    const std::size_t n = labels_.size();
    std::vector<std::pair<double, std::size_t>> dists(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double* p = points_.data() + i * n_features_;
      double acc = 0.0;
      for (std::size_t d = 0; d < n_features_; ++d) {
        const double diff = x[d] - p[d];
        acc += diff * diff;
      }
      dists[i] = {std::sqrt(acc), i};
    }
    // Sorting by (distance, index) keeps boundary ties deterministic.
    std::partial_sort(dists.begin(), dists.begin() + std::ptrdiff_t(k_), dists.end());
    std::vector<std::pair<double, std::size_t>> out(k_);
    for (std::size_t i = 0; i < k_; ++i) out[i] = {dists[i].first, labels_[dists[i].second]};
    return out;
  }

  void save_payload(BinWriter& w) const override {
    w.u64(k_);
    w.vec(points_);
    w.vec(labels_);
  }
};

}  // namespace

std::unique_ptr<MlModel> knn_fit(const FeatureMatrix& train, std::size_t n_classes,
                                 const KnnParams& params) {
  if (n_classes < 2) raise(Errc::InvalidArgument, "need at least two classes");
  train.validate(n_classes);
  if (train.labels.empty()) raise(Errc::EmptyTrainingSet, "training data carries no labels");
  if (params.k == 0 || params.k > train.rows)
    raise(Errc::InvalidArgument, "k must be between 1 and the training set size");

  auto model = std::make_unique<KnnModel>(n_classes, train.cols);
  model->k_ = params.k;
  model->points_ = train.values;
  model->labels_.assign(train.labels.begin(), train.labels.end());
  return model;
}

namespace detail {

std::unique_ptr<MlModel> knn_load(BinReader& r, std::size_t n_classes, std::size_t n_features) {
  auto model = std::make_unique<KnnModel>(n_classes, n_features);
  model->k_ = r.u64();
  model->points_ = r.vec<double>();
  model->labels_ = r.vec<std::uint64_t>();
  if (model->points_.size() != model->labels_.size() * n_features || model->labels_.empty())
    raise(Errc::IoError, "saved model has inconsistent dimensions");
  return model;
}

}  // namespace detail

}  // namespace ramanwt
