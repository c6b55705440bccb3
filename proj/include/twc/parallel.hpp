#pragma once
// Deterministic index-parallel map. TWC_THREADS caps the worker count; results
// are written to per-index slots, so parallel and serial runs agree.

#include <cstdlib>
#include <thread>
#include <vector>

namespace twc {

inline int thread_count() {
  if (const char* env = std::getenv("TWC_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : (int)hw;
}

template <typename F>
void parallel_for(int n, F&& f) {
  int workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w]() {
      try {
        for (int i = w; i < n; i += workers) f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace twc
