#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ramanwt/dcnn/network.hpp"

namespace ramanwt::dcnn {

struct TrainerOptions {
  std::size_t epochs = 30;
  std::size_t batch_size = 16;
  double lr = 0.01;
  double momentum = 0.9;
  // From this 1-based epoch on, the learning rate is multiplied once by
  // lr_drop_factor. 0 disables the drop.
  std::size_t lr_drop_epoch = 20;
  double lr_drop_factor = 0.1;
  bool adam = false;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double val_fraction = 0.1;
  // Stop once the running training accuracy reaches this level; >= 1 only
  // stops on a perfect epoch.
  double early_stop_train_acc = 1.0;
  std::uint64_t seed = 0;
};

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double lr = 0.0;
  double loss = 0.0;
  double train_acc = 0.0;
  double val_acc = 0.0;  // NaN when no validation split was held out
};

struct TrainResult {
  std::vector<EpochStats> history;
  bool diverged = false;
  bool early_stopped = false;
  std::vector<std::string> warnings;
  double final_train_acc = 0.0;
  double final_val_acc = std::numeric_limits<double>::quiet_NaN();
};

// Minibatch backprop with momentum SGD (or Adam), a one-step learning-rate
// schedule, a held-out validation slice, and a rollback to the last finite
// epoch if the loss ever stops being finite.
template <class T>
TrainResult train(Network<T>& net, const Tensor<T>& images,
                  const std::vector<std::size_t>& labels, const TrainerOptions& opt,
                  const std::function<void(const EpochStats&)>& on_epoch = {}) {
  const std::size_t n_classes = net.config().n_classes;
  if (images.n == 0) raise(Errc::EmptyTrainingSet, "no training samples");
  if (images.n != labels.size())
    raise(Errc::ShapeMismatch, "label count does not match sample count");
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] >= n_classes)
      raise(Errc::LabelOutOfRange, "label exceeds the class count", std::int64_t(i));
  if (opt.batch_size < 2) raise(Errc::BatchTooSmall, "batches below two samples cannot be normalized");
  if (opt.epochs == 0) raise(Errc::InvalidArgument, "need at least one epoch");

  TrainResult result;
  Rng rng(derive_seed(opt.seed, 0x7261696e));

  // Hold out the tail of one fixed shuffle for validation.
  std::vector<std::size_t> order(images.n);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  const auto val_n = std::size_t(std::floor(opt.val_fraction * double(images.n) + 0.5));
  const std::size_t train_n = images.n - val_n;
  if (train_n < 2) raise(Errc::BatchTooSmall, "fewer than two samples left to train on");
  std::vector<std::size_t> train_idx(order.begin(), order.begin() + std::ptrdiff_t(train_n));
  std::vector<std::size_t> val_idx(order.begin() + std::ptrdiff_t(train_n), order.end());

  {
    std::vector<std::size_t> counts(n_classes, 0);
    for (auto i : train_idx) ++counts[labels[i]];
    for (std::size_t c = 0; c < n_classes; ++c)
      if (counts[c] < 10)
        result.warnings.push_back("class " + std::to_string(c) + " has only " +
                                  std::to_string(counts[c]) + " training samples");
  }

  auto gather = [&](const std::vector<std::size_t>& idx, std::size_t from, std::size_t count,
                    Tensor<T>& batch, Tensor<T>& onehot) {
    batch = Tensor<T>(count, images.c, images.h, images.w);
    onehot = Tensor<T>(count, n_classes, 1, 1);
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t src = idx[from + k];
      std::copy(images.sample(src), images.sample(src) + images.per_sample(), batch.sample(k));
      onehot.sample(k)[labels[src]] = T(1);
    }
  };

  auto accuracy_on = [&](const std::vector<std::size_t>& idx) {
    if (idx.empty()) return std::numeric_limits<double>::quiet_NaN();
    net.set_training(false);
    std::size_t hits = 0;
    const std::size_t chunk = 64;
    for (std::size_t at = 0; at < idx.size(); at += chunk) {
      const std::size_t count = std::min(chunk, idx.size() - at);
      Tensor<T> batch, onehot;
      gather(idx, at, count, batch, onehot);
      const Tensor<T> logits = net.forward(batch);
      for (std::size_t k = 0; k < count; ++k) {
        const T* row = logits.sample(k);
        std::size_t best = 0;
        for (std::size_t c = 1; c < n_classes; ++c)
          if (row[c] > row[best]) best = c;
        if (best == labels[idx[at + k]]) ++hits;
      }
    }
    net.set_training(true);
    return double(hits) / double(idx.size());
  };

  // Optimizer slots, one per parameter buffer.
  auto params = net.params();
  std::vector<std::vector<T>> slot_m(params.size()), slot_v(params.size());
  for (std::size_t p = 0; p < params.size(); ++p) {
    slot_m[p].assign(params[p].value->size(), T(0));
    if (opt.adam) slot_v[p].assign(params[p].value->size(), T(0));
  }
  std::size_t adam_t = 0;

  auto snapshot = [&]() {
    std::vector<std::vector<T>> copy;
    for (auto* b : net.buffers()) copy.push_back(*b);
    return copy;
  };
  auto restore = [&](const std::vector<std::vector<T>>& copy) {
    auto bufs = net.buffers();
    for (std::size_t i = 0; i < bufs.size(); ++i) *bufs[i] = copy[i];
  };
  std::vector<std::vector<T>> last_good = snapshot();

  net.set_training(true);
  for (std::size_t epoch = 1; epoch <= opt.epochs; ++epoch) {
    const double lr = (opt.lr_drop_epoch && epoch >= opt.lr_drop_epoch)
                          ? opt.lr * opt.lr_drop_factor
                          : opt.lr;
    rng.shuffle(train_idx);

    // Batch boundaries; a trailing single sample joins the previous batch.
    std::vector<std::pair<std::size_t, std::size_t>> batches;
    for (std::size_t at = 0; at < train_n; at += opt.batch_size)
      batches.push_back({at, std::min(opt.batch_size, train_n - at)});
    if (batches.size() > 1 && batches.back().second < 2) {
      batches[batches.size() - 2].second += batches.back().second;
      batches.pop_back();
    }

    double loss_sum = 0.0;
    std::size_t hits = 0;
    bool finite = true;
    for (const auto& [at, count] : batches) {
      Tensor<T> batch, onehot;
      gather(train_idx, at, count, batch, onehot);
      const Tensor<T> logits = net.forward(batch);
      const LossResult<T> loss = softmax_crossentropy(logits, onehot);
      if (!std::isfinite(double(loss.loss))) {
        finite = false;
        break;
      }
      loss_sum += double(loss.loss) * double(count);
      for (std::size_t k = 0; k < count; ++k) {
        const T* proba = loss.probabilities.data() + k * n_classes;
        std::size_t best = 0;
        for (std::size_t c = 1; c < n_classes; ++c)
          if (proba[c] > proba[best]) best = c;
        if (best == labels[train_idx[at + k]]) ++hits;
      }

      net.zero_grad();
      net.backward(loss.grad);
      ++adam_t;
      for (std::size_t p = 0; p < params.size(); ++p) {
        auto& value = *params[p].value;
        auto& grad = *params[p].grad;
        if (opt.adam) {
          const double bc1 = 1.0 - std::pow(opt.adam_beta1, double(adam_t));
          const double bc2 = 1.0 - std::pow(opt.adam_beta2, double(adam_t));
          for (std::size_t i = 0; i < value.size(); ++i) {
            slot_m[p][i] = T(opt.adam_beta1) * slot_m[p][i] + T(1.0 - opt.adam_beta1) * grad[i];
            slot_v[p][i] =
                T(opt.adam_beta2) * slot_v[p][i] + T(1.0 - opt.adam_beta2) * grad[i] * grad[i];
            const double mhat = double(slot_m[p][i]) / bc1;
            const double vhat = double(slot_v[p][i]) / bc2;
            value[i] -= T(lr * mhat / (std::sqrt(vhat) + opt.adam_eps));
          }
        } else {
          for (std::size_t i = 0; i < value.size(); ++i) {
            slot_m[p][i] = T(opt.momentum) * slot_m[p][i] - T(lr) * grad[i];
            value[i] += slot_m[p][i];
          }
        }
      }
    }

    if (!finite) {
      restore(last_good);
      result.diverged = true;
      break;
    }
    last_good = snapshot();

    EpochStats stats;
    stats.epoch = epoch;
    stats.lr = lr;
    stats.loss = loss_sum / double(train_n);
    stats.train_acc = double(hits) / double(train_n);
    stats.val_acc = accuracy_on(val_idx);
    result.history.push_back(stats);
    result.final_train_acc = stats.train_acc;
    result.final_val_acc = stats.val_acc;
    if (on_epoch) on_epoch(stats);

    if (stats.train_acc >= opt.early_stop_train_acc) {
      result.early_stopped = true;
      break;
    }
  }
  net.set_training(false);
  return result;
}

}  // namespace ramanwt::dcnn
