#pragma once

#include <thread>
#include <vector>

namespace probesim {

// Runs fn(i) for i in [0, n) across a small thread pool. Work is split into
// contiguous stripes and every item writes only to its own slot, so results
// are identical for any thread count, including 1.
template <class Fn>
void parallel_for_index(int n, Fn&& fn, unsigned max_threads = 0) {
  if (n <= 0) return;
  unsigned hw = max_threads != 0 ? max_threads : std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const unsigned workers = static_cast<unsigned>(n) < hw ? static_cast<unsigned>(n) : hw;
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int chunk = (n + static_cast<int>(workers) - 1) / static_cast<int>(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const int lo = static_cast<int>(w) * chunk;
    const int hi = lo + chunk < n ? lo + chunk : n;
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace probesim
