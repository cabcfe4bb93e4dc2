#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace mihpo {

/// Run fn(i) for i in [0, n), split across up to `jobs` threads.
/// jobs <= 1 runs inline. Work items must be independent; determinism is
/// the caller's responsibility (give each item its own RNG stream and
/// write to its own output slot).
inline void parallel_for(std::int64_t n, int jobs, const std::function<void(std::int64_t)>& fn) {
  if (n <= 0) return;
  if (jobs <= 1 || n == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = static_cast<int>(std::min<std::int64_t>(jobs, n));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::int64_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace mihpo
