#pragma once

#include <cstddef>
#include <vector>

namespace ramanwt::dcnn {

// C (m x n) = alpha * A (m x k) * B (k x n) + beta * C, all row-major. The
// i-k-j order streams rows of B and C, which the compiler turns into packed
// fused multiply-adds.
template <class T>
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, T alpha, const T* a, const T* b,
             T beta, T* c) {
  for (std::size_t i = 0; i < m; ++i) {
    T* crow = c + i * n;
    if (beta == T(0)) {
      for (std::size_t j = 0; j < n; ++j) crow[j] = T(0);
    } else if (beta != T(1)) {
      for (std::size_t j = 0; j < n; ++j) crow[j] *= beta;
    }
    for (std::size_t p = 0; p < k; ++p) {
      const T av = alpha * a[i * k + p];
      const T* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

template <class T>
void transpose(std::size_t rows, std::size_t cols, const T* in, T* out) {
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out[j * rows + i] = in[i * cols + j];
}

// C = alpha * A (m x k) * B^T (B is n x k) + beta * C. Routed through an
// explicit transpose so the hot loop stays the vector-friendly one above.
template <class T>
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, T alpha, const T* a, const T* b,
             T beta, T* c, std::vector<T>& scratch) {
  scratch.resize(k * n);
  transpose(n, k, b, scratch.data());
  gemm_nn(m, n, k, alpha, a, scratch.data(), beta, c);
}

// C = alpha * A^T (A is k x m) * B (k x n) + beta * C.
template <class T>
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, T alpha, const T* a, const T* b,
             T beta, T* c, std::vector<T>& scratch) {
  scratch.resize(m * k);
  transpose(k, m, a, scratch.data());
  gemm_nn(m, n, k, alpha, scratch.data(), b, beta, c);
}

}  // namespace ramanwt::dcnn
