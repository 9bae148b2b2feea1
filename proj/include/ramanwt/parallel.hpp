#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace ramanwt {

// Runs fn(i) for i in [begin, end) over a fixed contiguous chunking.
// Each index owns its output slot, so results do not depend on the
// thread count or scheduling.
template <class Fn>
void parallel_for(std::size_t begin, std::size_t end, Fn&& fn, unsigned threads = 0) {
  const std::size_t n = end > begin ? end - begin : 0;
  if (n == 0) return;
  unsigned nthreads = threads ? threads : std::thread::hardware_concurrency();
  if (nthreads < 1) nthreads = 1;
  if (std::size_t(nthreads) > n) nthreads = unsigned(n);
  if (nthreads == 1) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
    return;
  }
  const std::size_t chunk = (n + nthreads - 1) / nthreads;
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (unsigned t = 0; t < nthreads; ++t) {
    const std::size_t lo = begin + chunk * t;
    const std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace ramanwt
