#pragma once

#include <cstddef>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>

#include <omp.h>

namespace shrinkreg {

/// Worker count for the parallel kernels. A positive request wins; otherwise
/// SHRINKREG_THREADS (if set and positive) caps the OpenMP default.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  int count = omp_get_max_threads();
  if (const char* env = std::getenv("SHRINKREG_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0 && cap < count) count = cap;
  }
  return count < 1 ? 1 : count;
}

/// Runs body(i) for i in [0, n) on `threads` workers. Iterations must only
/// write to their own slots. The first exception thrown by any iteration is
/// rethrown on the calling thread once the loop has drained.
template <class Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::mutex guard;
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long long i = 0; i < count; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!failure) failure = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace shrinkreg
