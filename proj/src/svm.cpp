#include <algorithm>
#include <cmath>
#include <numeric>

#include "ramanwt/error.hpp"
#include "ramanwt/ml.hpp"
#include "ramanwt/rng.hpp"

namespace ramanwt {

namespace {

double kernel_eval(Kernel kernel, double gamma, const double* a, const double* b,
                   std::size_t d) {
  double dot = 0.0;
  if (kernel == Kernel::Linear) {
    for (std::size_t i = 0; i < d; ++i) dot += a[i] * b[i];
    return dot;
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double diff = a[i] - b[i];
    sq += diff * diff;
  }
  return std::exp(-gamma * sq);
}

// Kernel rows against the training set, fully materialized when that fits in
// a fixed budget, otherwise recomputed through a direct-mapped row cache.
class KernelCache {
 public:
  KernelCache(const FeatureMatrix& data, Kernel kernel, double gamma)
      : data_(data), kernel_(kernel), gamma_(gamma), n_(data.rows) {
    constexpr std::size_t kFullLimit = std::size_t(128) << 20;
    full_ = n_ * n_ * sizeof(double) <= kFullLimit;
    if (full_) {
      matrix_.resize(n_ * n_);
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j <= i; ++j)
          matrix_[i * n_ + j] = matrix_[j * n_ + i] =
              kernel_eval(kernel_, gamma_, data_.row(i), data_.row(j), data_.cols);
    } else {
      slots_ = 512;
      matrix_.resize(slots_ * n_);
      slot_of_.assign(slots_, n_);  // n_ marks an empty slot
    }
  }

  const double* row(std::size_t i) {
    if (full_) return matrix_.data() + i * n_;
    const std::size_t slot = i % slots_;
    double* out = matrix_.data() + slot * n_;
    if (slot_of_[slot] != i) {
      for (std::size_t j = 0; j < n_; ++j)
        out[j] = kernel_eval(kernel_, gamma_, data_.row(i), data_.row(j), data_.cols);
      slot_of_[slot] = i;
    }
    return out;
  }

 private:
  const FeatureMatrix& data_;
  Kernel kernel_;
  double gamma_;
  std::size_t n_;
  bool full_ = false;
  std::size_t slots_ = 0;
  std::vector<double> matrix_;
  std::vector<std::size_t> slot_of_;
};

struct BinaryResult {
  std::vector<double> alpha;
  double b = 0.0;
  bool converged = true;
};

// Platt's sequential minimal optimization for one two-class subproblem with
// box constraint C and an incrementally maintained error cache.
class Smo {
 public:
  Smo(const FeatureMatrix& data, const std::vector<double>& y, const SvmParams& params,
      KernelCache& cache, Rng& rng)
      : data_(data), y_(y), p_(params), cache_(cache), rng_(rng) {
    alpha_.assign(data.rows, 0.0);
    // With all alphas zero the decision value is b = 0, so E_i = -y_i.
    error_.resize(data.rows);
    for (std::size_t i = 0; i < data.rows; ++i) error_[i] = -y_[i];
  }

  BinaryResult run() {
    const std::size_t n = data_.rows;
    bool examine_all = true;
    std::size_t changed = 0;
    std::size_t sweeps = 0;
    bool converged = true;
    do {
      if (++sweeps > p_.max_sweeps) {
        converged = false;
        break;
      }
      changed = 0;
      if (examine_all) {
        for (std::size_t i = 0; i < n; ++i) changed += examine(i);
        examine_all = false;
      } else {
        for (std::size_t i = 0; i < n; ++i)
          if (alpha_[i] > 0.0 && alpha_[i] < p_.c) changed += examine(i);
        if (changed == 0) examine_all = true;
      }
    } while (changed > 0 || examine_all);
    return {std::move(alpha_), b_, converged};
  }

 private:
  std::size_t examine(std::size_t i2) {
    const double y2 = y_[i2];
    const double e2 = error_[i2];
    const double r2 = e2 * y2;
    const bool violates = (r2 < -p_.tol && alpha_[i2] < p_.c) || (r2 > p_.tol && alpha_[i2] > 0.0);
    if (!violates) return 0;

    // First try the partner with the largest error gap.
    std::size_t best = i2;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < data_.rows; ++i) {
      if (!(alpha_[i] > 0.0 && alpha_[i] < p_.c)) continue;
      const double gap = std::abs(error_[i] - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best != i2 && step(best, i2)) return 1;

    // Then every non-bound point, then everything, from random offsets so no
    // point is systematically favored.
    const std::size_t n = data_.rows;
    std::size_t start = std::size_t(rng_.uniform_int(0, std::int64_t(n) - 1));
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = (start + k) % n;
      if (alpha_[i] > 0.0 && alpha_[i] < p_.c && step(i, i2)) return 1;
    }
    start = std::size_t(rng_.uniform_int(0, std::int64_t(n) - 1));
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = (start + k) % n;
      if (step(i, i2)) return 1;
    }
    return 0;
  }

  bool step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double a1_old = alpha_[i1], a2_old = alpha_[i2];
    const double y1 = y_[i1], y2 = y_[i2];
    const double e1 = error_[i1], e2 = error_[i2];
    const double s = y1 * y2;

    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, a2_old - a1_old);
      hi = std::min(p_.c, p_.c + a2_old - a1_old);
    } else {
      lo = std::max(0.0, a1_old + a2_old - p_.c);
      hi = std::min(p_.c, a1_old + a2_old);
    }
    if (lo >= hi) return false;

    const double* k1 = cache_.row(i1);
    const double k11 = k1[i1], k12 = k1[i2];
    const double k22 = cache_.row(i2)[i2];
    const double eta = k11 + k22 - 2.0 * k12;

    double a2;
    if (eta > 0.0) {
      a2 = std::clamp(a2_old + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      // The objective is linear along the constraint segment; move to the
      // better endpoint if there is one.
      const double slope = y2 * (e1 - e2);
      if (slope > 0.0)
        a2 = hi;
      else if (slope < 0.0)
        a2 = lo;
      else
        return false;
    }
    if (std::abs(a2 - a2_old) < 1e-12 * (a2 + a2_old + 1e-12)) return false;
    const double a1 = a1_old + s * (a2_old - a2);

    const double d1 = y1 * (a1 - a1_old);
    const double d2 = y2 * (a2 - a2_old);
    const double b1 = b_ - e1 - d1 * k11 - d2 * k12;
    const double b2 = b_ - e2 - d1 * k12 - d2 * k22;
    double b_new;
    if (a1 > 0.0 && a1 < p_.c)
      b_new = b1;
    else if (a2 > 0.0 && a2 < p_.c)
      b_new = b2;
    else
      b_new = (b1 + b2) / 2.0;

    const double* row1 = cache_.row(i1);
    const double* row2 = cache_.row(i2);
    const double db = b_new - b_;
    for (std::size_t i = 0; i < data_.rows; ++i)
      error_[i] += d1 * row1[i] + d2 * row2[i] + db;

    alpha_[i1] = a1;
    alpha_[i2] = a2;
    b_ = b_new;
    error_[i1] = decision_minus_y(i1);
    error_[i2] = decision_minus_y(i2);
    return true;
  }

  double decision_minus_y(std::size_t i) {
    // Recomputing the two touched entries exactly keeps cache drift from
    // accumulating over many steps.
    const double* row = cache_.row(i);
    double f = b_;
    for (std::size_t j = 0; j < data_.rows; ++j)
      if (alpha_[j] != 0.0) f += alpha_[j] * y_[j] * row[j];
    return f - y_[i];
  }

  const FeatureMatrix& data_;
  const std::vector<double>& y_;
  const SvmParams& p_;
  KernelCache& cache_;
  Rng& rng_;
  std::vector<double> alpha_;
  std::vector<double> error_;
  double b_ = 0.0;
};

class SvmModelImpl final : public MlModel {
 public:
  SvmModelImpl(std::size_t n_classes, std::size_t n_features) {
    n_classes_ = n_classes;
    n_features_ = n_features;
  }
  const char* kind() const override { return "svm"; }

  std::vector<double> predict_proba(const std::vector<double>& x) const override {
    std::vector<double> proba(n_classes_);
    double total = 0.0;
    for (std::size_t c = 0; c < n_classes_; ++c) {
      proba[c] = 1.0 / (1.0 + std::exp(-decision(c, x)));
      total += proba[c];
    }
    for (auto& p : proba) p /= total;
    return proba;
  }

  std::size_t predict(const std::vector<double>& x) const override {
    std::size_t best = 0;
    double best_score = decision(0, x);
    for (std::size_t c = 1; c < n_classes_; ++c) {
      const double score = decision(c, x);
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    return best;
  }

  double decision(std::size_t c, const std::vector<double>& x) const {
    if (x.size() != n_features_)
      raise(Errc::ShapeMismatch, "feature count differs from what the model was trained on");
    const auto& bin = binaries_[c];
    double acc = bin.b;
    for (std::size_t k = 0; k < bin.sv.size(); ++k)
      acc += bin.coef[k] *
             kernel_eval(kernel_, gamma_, points_.data() + bin.sv[k] * n_features_, x.data(),
                         n_features_);
    return acc;
  }

  struct Binary {
    std::vector<std::uint64_t> sv;  // indices into the shared point pool
    std::vector<double> coef;       // alpha_i * y_i per support vector
    double b = 0.0;
    bool converged = true;
  };

  Kernel kernel_ = Kernel::Rbf;
  double gamma_ = 0.0;
  std::vector<double> points_;  // pooled support vectors, row-major
  std::vector<Binary> binaries_;
  bool converged_ = true;

 private:
  void save_payload(BinWriter& w) const override {
    w.u8(kernel_ == Kernel::Rbf ? 1 : 0);
    w.f64(gamma_);
    w.u8(converged_ ? 1 : 0);
    w.u64(points_.size() / n_features_);
    w.vec(points_);
    w.u64(binaries_.size());
    for (const auto& bin : binaries_) {
      w.vec(bin.sv);
      w.vec(bin.coef);
      w.f64(bin.b);
      w.u8(bin.converged ? 1 : 0);
    }
  }
};

}  // namespace

std::unique_ptr<MlModel> svm_fit(const FeatureMatrix& train, std::size_t n_classes,
                                 const SvmParams& params) {
  if (n_classes < 2) raise(Errc::InvalidArgument, "need at least two classes");
  train.validate(n_classes);
  if (train.labels.empty()) raise(Errc::EmptyTrainingSet, "training data carries no labels");
  if (!(params.c > 0.0)) raise(Errc::InvalidArgument, "box constraint must be positive");

  auto model = std::make_unique<SvmModelImpl>(n_classes, train.cols);
  model->kernel_ = params.kernel;
  model->gamma_ = params.gamma > 0.0 ? params.gamma : 1.0 / double(train.cols);

  KernelCache cache(train, model->kernel_, model->gamma_);

  // One-vs-rest: every class gets its own two-class problem over the full set.
  std::vector<std::size_t> used(train.rows, 0);
  std::vector<SvmModelImpl::Binary> binaries(n_classes);
  std::vector<std::vector<std::pair<std::size_t, double>>> raw(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) {
    std::vector<double> y(train.rows);
    for (std::size_t i = 0; i < train.rows; ++i) y[i] = train.labels[i] == c ? 1.0 : -1.0;
    Rng rng(derive_seed(params.seed, c));
    Smo smo(train, y, params, cache, rng);
    BinaryResult res = smo.run();
    binaries[c].b = res.b;
    binaries[c].converged = res.converged;
    model->converged_ = model->converged_ && res.converged;
    for (std::size_t i = 0; i < train.rows; ++i)
      if (res.alpha[i] > 0.0) {
        raw[c].push_back({i, res.alpha[i] * y[i]});
        used[i] = 1;
      }
  }

  // Pool the union of support vectors so shared rows are stored once.
  std::vector<std::size_t> remap(train.rows, 0);
  std::size_t pooled = 0;
  for (std::size_t i = 0; i < train.rows; ++i)
    if (used[i]) {
      remap[i] = pooled++;
      model->points_.insert(model->points_.end(), train.row(i), train.row(i) + train.cols);
    }
  for (std::size_t c = 0; c < n_classes; ++c) {
    for (const auto& [idx, coef] : raw[c]) {
      binaries[c].sv.push_back(remap[idx]);
      binaries[c].coef.push_back(coef);
    }
  }
  model->binaries_ = std::move(binaries);
  return model;
}

bool svm_converged(const MlModel& model) {
  const auto* svm = dynamic_cast<const SvmModelImpl*>(&model);
  if (!svm) raise(Errc::InvalidArgument, "model is not a support vector machine");
  return svm->converged_;
}

SvmView svm_view(const MlModel& model) {
  const auto* svm = dynamic_cast<const SvmModelImpl*>(&model);
  if (!svm) raise(Errc::InvalidArgument, "model is not a support vector machine");
  SvmView view;
  view.kernel = svm->kernel_;
  view.gamma = svm->gamma_;
  view.n_features = svm->n_features();
  view.support_vectors = svm->points_;
  for (const auto& bin : svm->binaries_) {
    view.sv_index.push_back(bin.sv);
    view.dual_coef.push_back(bin.coef);
    view.intercept.push_back(bin.b);
  }
  return view;
}

namespace detail {

std::unique_ptr<MlModel> svm_load(BinReader& r, std::size_t n_classes, std::size_t n_features) {
  auto model = std::make_unique<SvmModelImpl>(n_classes, n_features);
  model->kernel_ = r.u8() ? Kernel::Rbf : Kernel::Linear;
  model->gamma_ = r.f64();
  model->converged_ = r.u8() != 0;
  const std::size_t n_points = r.u64();
  model->points_ = r.vec<double>();
  if (model->points_.size() != n_points * n_features)
    raise(Errc::IoError, "saved model has inconsistent dimensions");
  model->binaries_.resize(r.u64());
  for (auto& bin : model->binaries_) {
    bin.sv = r.vec<std::uint64_t>();
    bin.coef = r.vec<double>();
    bin.b = r.f64();
    bin.converged = r.u8() != 0;
    if (bin.sv.size() != bin.coef.size())
      raise(Errc::IoError, "saved model has inconsistent dimensions");
    for (auto idx : bin.sv)
      if (idx >= n_points) raise(Errc::IoError, "support vector index out of range");
  }
  if (model->binaries_.size() != n_classes)
    raise(Errc::IoError, "saved model has inconsistent dimensions");
  return model;
}

}  // namespace detail

}  // namespace ramanwt
