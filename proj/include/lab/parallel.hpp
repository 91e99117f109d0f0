#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace lab {

/// Static index partition across `threads` workers. Each index writes only its
/// own output slot, so results are deterministic and independent of sweep
/// order.
inline void parallel_for(long n, int threads, const std::function<void(long)>& body) {
  threads = std::max(1, threads);
  if (threads == 1 || n < 2 * threads) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  long chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    long lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (long i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace lab
