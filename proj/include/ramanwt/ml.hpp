#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ramanwt/serialize.hpp"

namespace ramanwt {

// Row-major design matrix with integer class labels.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<std::size_t> labels;  // may be empty for unlabeled data

  const double* row(std::size_t i) const { return values.data() + i * cols; }
  double* row(std::size_t i) { return values.data() + i * cols; }
  std::vector<double> row_vec(std::size_t i) const {
    return {row(i), row(i) + cols};
  }
  // Checks internal consistency; with n_classes > 0 also label range.
  void validate(std::size_t n_classes = 0) const;
};

class MlModel {
 public:
  virtual ~MlModel() = default;
  virtual const char* kind() const = 0;
  std::size_t n_classes() const { return n_classes_; }
  std::size_t n_features() const { return n_features_; }

  virtual std::vector<double> predict_proba(const std::vector<double>& x) const = 0;
  // Argmax of predict_proba; exact ties go to the lowest class index.
  virtual std::size_t predict(const std::vector<double>& x) const;
  std::vector<std::size_t> predict_all(const FeatureMatrix& data) const;

  void save(const std::string& path) const;

 protected:
  std::size_t n_classes_ = 0;
  std::size_t n_features_ = 0;

 private:
  virtual void save_payload(BinWriter& w) const = 0;
  friend std::unique_ptr<MlModel> load_model(const std::string& path);
};

// Reads any saved model back, dispatching on the kind recorded in the file.
std::unique_ptr<MlModel> load_model(const std::string& path);

// ---- Gaussian naive Bayes ----

struct NbParams {
  // Variance floor, relative to the largest per-feature variance over the
  // whole training set, keeping near-constant features from collapsing the
  // likelihood.
  double variance_floor_rel = 1e-9;
};

std::unique_ptr<MlModel> nb_fit(const FeatureMatrix& train, std::size_t n_classes,
                                const NbParams& params = {});

// ---- k nearest neighbors ----

struct KnnParams {
  std::size_t k = 5;
};

std::unique_ptr<MlModel> knn_fit(const FeatureMatrix& train, std::size_t n_classes,
                                 const KnnParams& params = {});

// ---- Random forest ----

struct RfParams {
  std::size_t n_trees = 100;
  std::size_t max_depth = 16;
  std::size_t min_samples_split = 2;
  // Features tried per node; 0 = floor(sqrt(n_features)).
  std::size_t mtry = 0;
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

std::unique_ptr<MlModel> rf_fit(const FeatureMatrix& train, std::size_t n_classes,
                                const RfParams& params = {});

// Result of an exhaustive threshold search over candidate features.
struct BestSplit {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;        // rows with value <= threshold go left
  double impurity_decrease = 0.0;
};

// Scans midpoints between consecutive distinct values of each candidate
// feature and returns the split with the largest Gini impurity decrease.
// Ties keep the first candidate in (feature order, ascending threshold).
BestSplit find_best_split(const FeatureMatrix& data, const std::vector<std::size_t>& rows,
                          const std::vector<std::size_t>& features, std::size_t n_classes);

// ---- Support vector machine ----

enum class Kernel { Linear, Rbf };

struct SvmParams {
  double c = 10.0;
  Kernel kernel = Kernel::Rbf;
  double gamma = 0.0;  // RBF width; 0 = 1/n_features
  double tol = 1e-3;
  std::size_t max_sweeps = 2000;  // cap on outer optimization passes
  std::uint64_t seed = 0;
};

// One-vs-rest C-SVM trained with sequential minimal optimization.
std::unique_ptr<MlModel> svm_fit(const FeatureMatrix& train, std::size_t n_classes,
                                 const SvmParams& params = {});

// True when every binary subproblem met the KKT tolerance within the sweep
// budget. A model that ran out of sweeps is still usable, just not optimal.
bool svm_converged(const MlModel& model);

// Read-only view of a trained machine: the pooled support vectors plus one
// coefficient row (alpha_i * y_i over the pool) and offset per one-vs-rest
// problem.
struct SvmView {
  Kernel kernel = Kernel::Rbf;
  double gamma = 0.0;
  std::size_t n_features = 0;
  std::vector<double> support_vectors;               // row-major pool
  std::vector<std::vector<std::uint64_t>> sv_index;  // per class, into the pool
  std::vector<std::vector<double>> dual_coef;        // per class, alpha_i * y_i
  std::vector<double> intercept;                     // per class
};

SvmView svm_view(const MlModel& model);

}  // namespace ramanwt
