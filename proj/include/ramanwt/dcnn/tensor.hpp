#pragma once

#include <cstddef>
#include <vector>

#include "ramanwt/error.hpp"

namespace ramanwt::dcnn {

// Dense NCHW tensor. Fully-connected activations use h = w = 1.
template <class T>
struct Tensor {
  std::size_t n = 0, c = 0, h = 0, w = 0;
  std::vector<T> data;

  Tensor() = default;
  Tensor(std::size_t n_, std::size_t c_, std::size_t h_, std::size_t w_)
      : n(n_), c(c_), h(h_), w(w_), data(n_ * c_ * h_ * w_, T(0)) {}

  std::size_t size() const { return data.size(); }
  std::size_t per_sample() const { return c * h * w; }

  T* sample(std::size_t i) { return data.data() + i * per_sample(); }
  const T* sample(std::size_t i) const { return data.data() + i * per_sample(); }

  T& at(std::size_t in, std::size_t ic, std::size_t ih, std::size_t iw) {
    return data[((in * c + ic) * h + ih) * w + iw];
  }
  T at(std::size_t in, std::size_t ic, std::size_t ih, std::size_t iw) const {
    return data[((in * c + ic) * h + ih) * w + iw];
  }

  bool same_shape(const Tensor& o) const { return n == o.n && c == o.c && h == o.h && w == o.w; }

  void require_shape(std::size_t n_, std::size_t c_, std::size_t h_, std::size_t w_,
                     const char* what) const {
    if (n != n_ || c != c_ || h != h_ || w != w_)
      raise(Errc::ShapeMismatch, std::string("unexpected tensor shape for ") + what);
  }
};

}  // namespace ramanwt::dcnn
