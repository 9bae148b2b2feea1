#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ramanwt/dcnn/gemm.hpp"
#include "ramanwt/dcnn/tensor.hpp"
#include "ramanwt/error.hpp"
#include "ramanwt/rng.hpp"

namespace ramanwt::dcnn {

// A learnable buffer and its gradient, for optimizers to walk.
template <class T>
struct ParamRef {
  std::vector<T>* value;
  std::vector<T>* grad;
};

template <class T>
class Conv2d {
 public:
  Conv2d(std::size_t in_ch, std::size_t out_ch, std::size_t ksize, std::size_t stride,
         std::size_t pad)
      : in_ch_(in_ch), out_ch_(out_ch), ksize_(ksize), stride_(stride), pad_(pad),
        weight_(out_ch * in_ch * ksize * ksize, T(0)), bias_(out_ch, T(0)),
        dweight_(weight_.size(), T(0)), dbias_(out_ch, T(0)) {}

  void init(Rng& rng) {
    const double limit = std::sqrt(6.0 / double(in_ch_ * ksize_ * ksize_));
    for (auto& w : weight_) w = T(rng.uniform(-limit, limit));
    std::fill(bias_.begin(), bias_.end(), T(0));
  }

  std::size_t out_side(std::size_t in_side) const {
    return (in_side + 2 * pad_ - ksize_) / stride_ + 1;
  }

  Tensor<T> forward(const Tensor<T>& x) {
    if (x.c != in_ch_) raise(Errc::ShapeMismatch, "convolution input channel mismatch");
    in_h_ = x.h;
    in_w_ = x.w;
    const std::size_t oh = out_side(x.h), ow = out_side(x.w);
    const std::size_t kdim = in_ch_ * ksize_ * ksize_;
    const std::size_t span = oh * ow;

    Tensor<T> y(x.n, out_ch_, oh, ow);
    cols_.assign(x.n * kdim * span, T(0));
    for (std::size_t i = 0; i < x.n; ++i) {
      T* cols = cols_.data() + i * kdim * span;
      im2col(x.sample(i), cols, oh, ow);
      gemm_nn(out_ch_, span, kdim, T(1), weight_.data(), cols, T(0), y.sample(i));
      for (std::size_t c = 0; c < out_ch_; ++c) {
        T* plane = y.sample(i) + c * span;
        for (std::size_t l = 0; l < span; ++l) plane[l] += bias_[c];
      }
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& dy) {
    const std::size_t oh = dy.h, ow = dy.w;
    const std::size_t kdim = in_ch_ * ksize_ * ksize_;
    const std::size_t span = oh * ow;
    if (cols_.size() != dy.n * kdim * span)
      raise(Errc::ShapeMismatch, "convolution backward without matching forward");

    Tensor<T> dx(dy.n, in_ch_, in_h_, in_w_);
    std::vector<T> dcols(kdim * span);
    for (std::size_t i = 0; i < dy.n; ++i) {
      const T* cols = cols_.data() + i * kdim * span;
      gemm_nt(out_ch_, kdim, span, T(1), dy.sample(i), cols, T(1), dweight_.data(), scratch_);
      for (std::size_t c = 0; c < out_ch_; ++c) {
        const T* plane = dy.sample(i) + c * span;
        T acc = T(0);
        for (std::size_t l = 0; l < span; ++l) acc += plane[l];
        dbias_[c] += acc;
      }
      gemm_tn(kdim, span, out_ch_, T(1), weight_.data(), dy.sample(i), T(0), dcols.data(),
              scratch_);
      col2im(dcols.data(), dx.sample(i), oh, ow);
    }
    return dx;
  }

  void collect(std::vector<ParamRef<T>>& out) {
    out.push_back({&weight_, &dweight_});
    out.push_back({&bias_, &dbias_});
  }

  std::vector<T>& weight() { return weight_; }
  std::vector<T>& bias() { return bias_; }

 private:
  void im2col(const T* x, T* cols, std::size_t oh, std::size_t ow) const {
    const std::size_t span = oh * ow;
    std::size_t r = 0;
    for (std::size_t c = 0; c < in_ch_; ++c) {
      const T* plane = x + c * in_h_ * in_w_;
      for (std::size_t ky = 0; ky < ksize_; ++ky) {
        for (std::size_t kx = 0; kx < ksize_; ++kx, ++r) {
          T* row = cols + r * span;
          for (std::size_t oy = 0; oy < oh; ++oy) {
            const std::ptrdiff_t iy = std::ptrdiff_t(oy * stride_ + ky) - std::ptrdiff_t(pad_);
            if (iy < 0 || iy >= std::ptrdiff_t(in_h_)) continue;
            for (std::size_t ox = 0; ox < ow; ++ox) {
              const std::ptrdiff_t ix = std::ptrdiff_t(ox * stride_ + kx) - std::ptrdiff_t(pad_);
              if (ix < 0 || ix >= std::ptrdiff_t(in_w_)) continue;
              row[oy * ow + ox] = plane[iy * std::ptrdiff_t(in_w_) + ix];
            }
          }
        }
      }
    }
  }

  void col2im(const T* cols, T* dx, std::size_t oh, std::size_t ow) const {
    const std::size_t span = oh * ow;
    std::size_t r = 0;
    for (std::size_t c = 0; c < in_ch_; ++c) {
      T* plane = dx + c * in_h_ * in_w_;
      for (std::size_t ky = 0; ky < ksize_; ++ky) {
        for (std::size_t kx = 0; kx < ksize_; ++kx, ++r) {
          const T* row = cols + r * span;
          for (std::size_t oy = 0; oy < oh; ++oy) {
            const std::ptrdiff_t iy = std::ptrdiff_t(oy * stride_ + ky) - std::ptrdiff_t(pad_);
            if (iy < 0 || iy >= std::ptrdiff_t(in_h_)) continue;
            for (std::size_t ox = 0; ox < ow; ++ox) {
              const std::ptrdiff_t ix = std::ptrdiff_t(ox * stride_ + kx) - std::ptrdiff_t(pad_);
              if (ix < 0 || ix >= std::ptrdiff_t(in_w_)) continue;
              plane[iy * std::ptrdiff_t(in_w_) + ix] += row[oy * ow + ox];
            }
          }
        }
      }
    }
  }

  std::size_t in_ch_, out_ch_, ksize_, stride_, pad_;
  std::size_t in_h_ = 0, in_w_ = 0;
  std::vector<T> weight_, bias_, dweight_, dbias_;
  std::vector<T> cols_;
  std::vector<T> scratch_;
};

template <class T>
class BatchNorm2d {
 public:
  explicit BatchNorm2d(std::size_t channels, T eps = T(1e-5), T momentum = T(0.1),
                       bool affine = true)
      : channels_(channels), eps_(eps), momentum_(momentum), affine_(affine),
        gamma_(channels, T(1)), beta_(channels, T(0)), dgamma_(channels, T(0)),
        dbeta_(channels, T(0)), running_mean_(channels, T(0)), running_var_(channels, T(1)) {}

  void set_training(bool training) { training_ = training; }

  Tensor<T> forward(const Tensor<T>& x) {
    if (x.c != channels_) raise(Errc::ShapeMismatch, "normalization channel mismatch");
    Tensor<T> y(x.n, x.c, x.h, x.w);
    const std::size_t plane = x.h * x.w;
    const std::size_t m = x.n * plane;

    if (!training_) {
      for (std::size_t c = 0; c < channels_; ++c) {
        const T inv = T(1) / std::sqrt(running_var_[c] + eps_);
        for (std::size_t i = 0; i < x.n; ++i) {
          const T* src = x.sample(i) + c * plane;
          T* dst = y.sample(i) + c * plane;
          for (std::size_t l = 0; l < plane; ++l)
            dst[l] = gamma_[c] * (src[l] - running_mean_[c]) * inv + beta_[c];
        }
      }
      return y;
    }

    if (x.n < 2)
      raise(Errc::BatchTooSmall, "normalization statistics need at least two samples");
    mean_.assign(channels_, T(0));
    inv_std_.assign(channels_, T(0));
    xhat_ = Tensor<T>(x.n, x.c, x.h, x.w);
    for (std::size_t c = 0; c < channels_; ++c) {
      T mean = T(0);
      for (std::size_t i = 0; i < x.n; ++i) {
        const T* src = x.sample(i) + c * plane;
        for (std::size_t l = 0; l < plane; ++l) mean += src[l];
      }
      mean /= T(m);
      T var = T(0);
      for (std::size_t i = 0; i < x.n; ++i) {
        const T* src = x.sample(i) + c * plane;
        for (std::size_t l = 0; l < plane; ++l) {
          const T d = src[l] - mean;
          var += d * d;
        }
      }
      var /= T(m);
      const T inv = T(1) / std::sqrt(var + eps_);
      mean_[c] = mean;
      inv_std_[c] = inv;
      running_mean_[c] = (T(1) - momentum_) * running_mean_[c] + momentum_ * mean;
      running_var_[c] = (T(1) - momentum_) * running_var_[c] + momentum_ * var;
      for (std::size_t i = 0; i < x.n; ++i) {
        const T* src = x.sample(i) + c * plane;
        T* xh = xhat_.sample(i) + c * plane;
        T* dst = y.sample(i) + c * plane;
        for (std::size_t l = 0; l < plane; ++l) {
          xh[l] = (src[l] - mean) * inv;
          dst[l] = gamma_[c] * xh[l] + beta_[c];
        }
      }
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& dy) {
    if (!dy.same_shape(xhat_))
      raise(Errc::ShapeMismatch, "normalization backward without matching forward");
    const std::size_t plane = dy.h * dy.w;
    const std::size_t m = dy.n * plane;
    Tensor<T> dx(dy.n, dy.c, dy.h, dy.w);
    for (std::size_t c = 0; c < channels_; ++c) {
      T sum_dy = T(0), sum_dy_xhat = T(0);
      for (std::size_t i = 0; i < dy.n; ++i) {
        const T* g = dy.sample(i) + c * plane;
        const T* xh = xhat_.sample(i) + c * plane;
        for (std::size_t l = 0; l < plane; ++l) {
          sum_dy += g[l];
          sum_dy_xhat += g[l] * xh[l];
        }
      }
      dbeta_[c] += sum_dy;
      dgamma_[c] += sum_dy_xhat;
      const T scale = gamma_[c] * inv_std_[c] / T(m);
      for (std::size_t i = 0; i < dy.n; ++i) {
        const T* g = dy.sample(i) + c * plane;
        const T* xh = xhat_.sample(i) + c * plane;
        T* out = dx.sample(i) + c * plane;
        for (std::size_t l = 0; l < plane; ++l)
          out[l] = scale * (T(m) * g[l] - sum_dy - xh[l] * sum_dy_xhat);
      }
    }
    return dx;
  }

  void collect(std::vector<ParamRef<T>>& out) {
    if (!affine_) return;
    out.push_back({&gamma_, &dgamma_});
    out.push_back({&beta_, &dbeta_});
  }

  std::vector<T>& gamma() { return gamma_; }
  std::vector<T>& beta() { return beta_; }
  std::vector<T>& running_mean() { return running_mean_; }
  std::vector<T>& running_var() { return running_var_; }

 private:
  std::size_t channels_;
  T eps_, momentum_;
  bool affine_;
  bool training_ = true;
  std::vector<T> gamma_, beta_, dgamma_, dbeta_;
  std::vector<T> running_mean_, running_var_;
  std::vector<T> mean_, inv_std_;
  Tensor<T> xhat_;
};

template <class T>
class Relu {
 public:
  Tensor<T> forward(const Tensor<T>& x) {
    mask_.assign(x.size(), 0);
    Tensor<T> y(x.n, x.c, x.h, x.w);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x.data[i] > T(0)) {
        y.data[i] = x.data[i];
        mask_[i] = 1;
      }
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& dy) {
    if (dy.size() != mask_.size())
      raise(Errc::ShapeMismatch, "activation backward without matching forward");
    Tensor<T> dx(dy.n, dy.c, dy.h, dy.w);
    for (std::size_t i = 0; i < dy.size(); ++i) dx.data[i] = mask_[i] ? dy.data[i] : T(0);
    return dx;
  }

 private:
  std::vector<std::uint8_t> mask_;
};

template <class T>
class MaxPool2d {
 public:
  explicit MaxPool2d(std::size_t ksize = 2, std::size_t stride = 2)
      : ksize_(ksize), stride_(stride) {}

  Tensor<T> forward(const Tensor<T>& x) {
    if (x.h < ksize_ || x.w < ksize_) raise(Errc::ShapeMismatch, "pooling window exceeds input");
    in_h_ = x.h;
    in_w_ = x.w;
    const std::size_t oh = (x.h - ksize_) / stride_ + 1;
    const std::size_t ow = (x.w - ksize_) / stride_ + 1;
    Tensor<T> y(x.n, x.c, oh, ow);
    argmax_.assign(y.size(), 0);
    std::size_t out_idx = 0;
    for (std::size_t i = 0; i < x.n; ++i) {
      for (std::size_t c = 0; c < x.c; ++c) {
        const T* plane = x.sample(i) + c * x.h * x.w;
        for (std::size_t oy = 0; oy < oh; ++oy) {
          for (std::size_t ox = 0; ox < ow; ++ox, ++out_idx) {
            std::size_t best = (oy * stride_) * x.w + ox * stride_;
            T best_v = plane[best];
            for (std::size_t ky = 0; ky < ksize_; ++ky) {
              for (std::size_t kx = 0; kx < ksize_; ++kx) {
                const std::size_t idx = (oy * stride_ + ky) * x.w + (ox * stride_ + kx);
                if (plane[idx] > best_v) {
                  best_v = plane[idx];
                  best = idx;
                }
              }
            }
            y.data[out_idx] = best_v;
            argmax_[out_idx] = std::uint32_t(best);
          }
        }
      }
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& dy) {
    if (dy.size() != argmax_.size())
      raise(Errc::ShapeMismatch, "pooling backward without matching forward");
    Tensor<T> dx(dy.n, dy.c, in_h_, in_w_);
    const std::size_t in_plane = in_h_ * in_w_;
    const std::size_t out_plane = dy.h * dy.w;
    for (std::size_t i = 0; i < dy.n; ++i) {
      for (std::size_t c = 0; c < dy.c; ++c) {
        const T* g = dy.sample(i) + c * out_plane;
        T* out = dx.sample(i) + c * in_plane;
        const std::uint32_t* am = argmax_.data() + (i * dy.c + c) * out_plane;
        for (std::size_t l = 0; l < out_plane; ++l) out[am[l]] += g[l];
      }
    }
    return dx;
  }

 private:
  std::size_t ksize_, stride_;
  std::size_t in_h_ = 0, in_w_ = 0;
  std::vector<std::uint32_t> argmax_;
};

template <class T>
class Linear {
 public:
  Linear(std::size_t in_features, std::size_t out_features)
      : in_(in_features), out_(out_features), weight_(out_features * in_features, T(0)),
        bias_(out_features, T(0)), dweight_(weight_.size(), T(0)), dbias_(out_features, T(0)) {}

  void init(Rng& rng) {
    const double limit = std::sqrt(6.0 / double(in_));
    for (auto& w : weight_) w = T(rng.uniform(-limit, limit));
    std::fill(bias_.begin(), bias_.end(), T(0));
  }

  Tensor<T> forward(const Tensor<T>& x) {
    if (x.per_sample() != in_) raise(Errc::ShapeMismatch, "dense layer input size mismatch");
    input_ = x;
    Tensor<T> y(x.n, out_, 1, 1);
    gemm_nt(x.n, out_, in_, T(1), x.data.data(), weight_.data(), T(0), y.data.data(), scratch_);
    for (std::size_t i = 0; i < x.n; ++i) {
      T* row = y.sample(i);
      for (std::size_t o = 0; o < out_; ++o) row[o] += bias_[o];
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& dy) {
    if (dy.n != input_.n || dy.per_sample() != out_)
      raise(Errc::ShapeMismatch, "dense layer backward without matching forward");
    gemm_tn(out_, in_, dy.n, T(1), dy.data.data(), input_.data.data(), T(1), dweight_.data(),
            scratch_);
    for (std::size_t i = 0; i < dy.n; ++i) {
      const T* row = dy.sample(i);
      for (std::size_t o = 0; o < out_; ++o) dbias_[o] += row[o];
    }
    Tensor<T> dx(input_.n, input_.c, input_.h, input_.w);
    gemm_nn(dy.n, in_, out_, T(1), dy.data.data(), weight_.data(), T(0), dx.data.data());
    return dx;
  }

  void collect(std::vector<ParamRef<T>>& out) {
    out.push_back({&weight_, &dweight_});
    out.push_back({&bias_, &dbias_});
  }

  std::vector<T>& weight() { return weight_; }
  std::vector<T>& bias() { return bias_; }

 private:
  std::size_t in_, out_;
  std::vector<T> weight_, bias_, dweight_, dbias_;
  Tensor<T> input_;
  std::vector<T> scratch_;
};

template <class T>
struct LossResult {
  T loss = T(0);
  Tensor<T> grad;               // d loss / d logits
  std::vector<T> probabilities; // row-major n x classes
};

// Cross entropy over softmax of the logits. Targets must be one-hot rows:
// every entry 0 or 1 with exactly one 1.
template <class T>
LossResult<T> softmax_crossentropy(const Tensor<T>& logits, const Tensor<T>& onehot) {
  if (!logits.same_shape(onehot)) raise(Errc::ShapeMismatch, "logits and targets differ in shape");
  if (logits.n == 0 || logits.c == 0 || logits.h != 1 || logits.w != 1)
    raise(Errc::ShapeMismatch, "loss expects one logit row per sample");
  const std::size_t n = logits.n, classes = logits.c;

  LossResult<T> out;
  out.grad = Tensor<T>(n, classes, 1, 1);
  out.probabilities.resize(n * classes);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const T* row = logits.sample(i);
    const T* target = onehot.sample(i);
    std::size_t hot = classes;
    for (std::size_t c = 0; c < classes; ++c) {
      if (target[c] == T(1)) {
        if (hot != classes) raise(Errc::InvalidArgument, "target row has several ones",
                                  std::int64_t(i));
        hot = c;
      } else if (target[c] != T(0)) {
        raise(Errc::InvalidArgument, "target row is not one-hot", std::int64_t(i));
      }
    }
    if (hot == classes) raise(Errc::InvalidArgument, "target row has no one", std::int64_t(i));

    T top = row[0];
    for (std::size_t c = 1; c < classes; ++c) top = std::max(top, row[c]);
    double denom = 0.0;
    for (std::size_t c = 0; c < classes; ++c) denom += std::exp(double(row[c] - top));
    const double log_denom = std::log(denom);
    total += log_denom - double(row[hot] - top);

    T* grad = out.grad.sample(i);
    T* proba = out.probabilities.data() + i * classes;
    for (std::size_t c = 0; c < classes; ++c) {
      const T p = T(std::exp(double(row[c] - top)) / denom);
      proba[c] = p;
      grad[c] = (p - target[c]) / T(n);
    }
  }
  out.loss = T(total / double(n));
  return out;
}

}  // namespace ramanwt::dcnn
