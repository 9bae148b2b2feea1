#include <algorithm>
#include <cmath>
#include <numeric>

#include "ramanwt/error.hpp"
#include "ramanwt/ml.hpp"
#include "ramanwt/rng.hpp"

namespace ramanwt {

namespace {

// Flat node layout; leaves carry a class distribution and left == 0.
struct TreeNode {
  std::uint32_t feature = 0;
  double threshold = 0.0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
};

struct Tree {
  std::vector<TreeNode> nodes;
  std::vector<double> leaf_proba;  // nodes.size() x n_classes, zeros for splits

  const double* walk(const double* x, std::size_t n_classes) const {
    std::uint32_t at = 0;
    while (nodes[at].left != 0)
      at = x[nodes[at].feature] <= nodes[at].threshold ? nodes[at].left : nodes[at].right;
    return leaf_proba.data() + std::size_t(at) * n_classes;
  }
};

double gini(const std::vector<double>& counts, double total) {
  double acc = 1.0;
  for (double c : counts) {
    const double p = c / total;
    acc -= p * p;
  }
  return acc;
}

class RfModel final : public MlModel {
 public:
  RfModel(std::size_t n_classes, std::size_t n_features) {
    n_classes_ = n_classes;
    n_features_ = n_features;
  }
  const char* kind() const override { return "rf"; }

  std::vector<double> predict_proba(const std::vector<double>& x) const override {
    if (x.size() != n_features_)
      raise(Errc::ShapeMismatch, "feature count differs from what the model was trained on");
    std::vector<double> proba(n_classes_, 0.0);
    for (const auto& tree : trees_) {
      const double* leaf = tree.walk(x.data(), n_classes_);
      for (std::size_t c = 0; c < n_classes_; ++c) proba[c] += leaf[c];
    }
    for (auto& p : proba) p /= double(trees_.size());
    return proba;
  }

  std::vector<Tree> trees_;

 private:
  void save_payload(BinWriter& w) const override {
    w.u64(trees_.size());
    for (const auto& t : trees_) {
      w.u64(t.nodes.size());
      for (const auto& n : t.nodes) {
        w.u32(n.feature);
        w.f64(n.threshold);
        w.u32(n.left);
        w.u32(n.right);
      }
      w.vec(t.leaf_proba);
    }
  }
};

struct TreeBuilder {
  const FeatureMatrix& data;
  std::size_t n_classes;
  const RfParams& params;
  std::size_t mtry;
  Rng& rng;
  Tree tree;

  std::uint32_t build(std::vector<std::size_t>& rows, std::size_t depth) {
    const auto idx = std::uint32_t(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.leaf_proba.insert(tree.leaf_proba.end(), n_classes, 0.0);

    std::vector<double> counts(n_classes, 0.0);
    for (auto r : rows) counts[data.labels[r]] += 1.0;
    const bool pure =
        std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) <= 1;

    BestSplit split;
    if (!pure && depth < params.max_depth && rows.size() >= params.min_samples_split) {
      std::vector<std::size_t> features(data.cols);
      std::iota(features.begin(), features.end(), std::size_t(0));
      rng.shuffle(features);
      features.resize(mtry);
      std::sort(features.begin(), features.end());
      split = find_best_split(data, rows, features, n_classes);
    }

    if (!split.found) {
      double* leaf = tree.leaf_proba.data() + std::size_t(idx) * n_classes;
      for (std::size_t c = 0; c < n_classes; ++c) leaf[c] = counts[c] / double(rows.size());
      return idx;
    }

    std::vector<std::size_t> left, right;
    for (auto r : rows)
      (data.row(r)[split.feature] <= split.threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    tree.nodes[idx].feature = std::uint32_t(split.feature);
    tree.nodes[idx].threshold = split.threshold;
    const auto l = build(left, depth + 1);
    tree.nodes[idx].left = l;
    const auto r = build(right, depth + 1);
    tree.nodes[idx].right = r;
    return idx;
  }
};

}  // namespace

BestSplit find_best_split(const FeatureMatrix& data, const std::vector<std::size_t>& rows,
                          const std::vector<std::size_t>& features, std::size_t n_classes) {
  BestSplit best;
  if (rows.size() < 2) return best;

  std::vector<double> total_counts(n_classes, 0.0);
  for (auto r : rows) total_counts[data.labels[r]] += 1.0;
  const double total = double(rows.size());
  const double parent_gini = gini(total_counts, total);

  std::vector<std::pair<double, std::size_t>> ordered(rows.size());
  for (std::size_t f : features) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      ordered[i] = {data.row(rows[i])[f], data.labels[rows[i]]};
    std::sort(ordered.begin(), ordered.end());

    std::vector<double> left_counts(n_classes, 0.0);
    std::vector<double> right_counts = total_counts;
    for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
      left_counts[ordered[i].second] += 1.0;
      right_counts[ordered[i].second] -= 1.0;
      if (ordered[i].first == ordered[i + 1].first) continue;

      const double n_left = double(i + 1);
      const double n_right = total - n_left;
      const double weighted =
          (n_left * gini(left_counts, n_left) + n_right * gini(right_counts, n_right)) / total;
      const double decrease = parent_gini - weighted;
      if (decrease > 1e-12 && (!best.found || decrease > best.impurity_decrease + 1e-12)) {
        best.found = true;
        best.feature = f;
        best.threshold = (ordered[i].first + ordered[i + 1].first) / 2.0;
        best.impurity_decrease = decrease;
      }
    }
  }
  return best;
}

std::unique_ptr<MlModel> rf_fit(const FeatureMatrix& train, std::size_t n_classes,
                                const RfParams& params) {
  if (n_classes < 2) raise(Errc::InvalidArgument, "need at least two classes");
  train.validate(n_classes);
  if (train.labels.empty()) raise(Errc::EmptyTrainingSet, "training data carries no labels");
  if (params.n_trees == 0) raise(Errc::InvalidArgument, "forest needs at least one tree");

  const std::size_t mtry =
      params.mtry ? std::min(params.mtry, train.cols)
                  : std::max<std::size_t>(1, std::size_t(std::sqrt(double(train.cols))));

  auto model = std::make_unique<RfModel>(n_classes, train.cols);
  model->trees_.resize(params.n_trees);
  for (std::size_t t = 0; t < params.n_trees; ++t) {
    Rng rng(derive_seed(params.seed, t));
    std::vector<std::size_t> rows(train.rows);
    if (params.bootstrap) {
      for (auto& r : rows) r = std::size_t(rng.uniform_int(0, std::int64_t(train.rows) - 1));
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t(0));
    }
    TreeBuilder builder{train, n_classes, params, mtry, rng, {}};
    builder.build(rows, 0);
    model->trees_[t] = std::move(builder.tree);
  }
  return model;
}

namespace detail {

std::unique_ptr<MlModel> rf_load(BinReader& r, std::size_t n_classes, std::size_t n_features) {
  auto model = std::make_unique<RfModel>(n_classes, n_features);
  model->trees_.resize(r.u64());
  for (auto& t : model->trees_) {
    t.nodes.resize(r.u64());
    for (auto& n : t.nodes) {
      n.feature = r.u32();
      n.threshold = r.f64();
      n.left = r.u32();
      n.right = r.u32();
    }
    t.leaf_proba = r.vec<double>();
    if (t.leaf_proba.size() != t.nodes.size() * n_classes)
      raise(Errc::IoError, "saved model has inconsistent dimensions");
  }
  if (model->trees_.empty()) raise(Errc::IoError, "saved forest holds no trees");
  return model;
}

}  // namespace detail

}  // namespace ramanwt
