#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace entirelab {

/// Worker count: ENTIRELAB_THREADS if set, else hardware concurrency.
inline int default_thread_count() {
  if (const char* env = std::getenv("ENTIRELAB_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

/// Index-parallel loop with deterministic results: each index writes only its
/// own slot, reductions happen afterwards in index order.  If any index
/// throws, the exception thrown by the smallest such index is rethrown.
template <class Fn>
void parallel_for(int n, Fn&& fn, int threads = 0) {
  if (threads <= 0) threads = default_thread_count();
  if (threads == 1 || n < 4 * threads) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<int> error_index(threads, -1);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([=, &fn, &errors, &error_index] {
      for (int i = t; i < n; i += threads) {
        try {
          fn(i);
        } catch (...) {
          errors[t] = std::current_exception();
          error_index[t] = i;
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  int best = -1;
  for (int t = 0; t < threads; ++t)
    if (error_index[t] >= 0 && (best < 0 || error_index[t] < error_index[best]))
      best = t;
  if (best >= 0) std::rethrow_exception(errors[best]);
}

}  // namespace entirelab
