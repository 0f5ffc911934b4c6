#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace wlab {

/// Worker count: explicit setting, then WULFF_LAB_THREADS, then 1.
inline int& thread_setting() {
  static int n = 0;
  return n;
}

inline int thread_count() {
  if (thread_setting() > 0) return thread_setting();
  if (const char* env = std::getenv("WULFF_LAB_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

inline void set_thread_count(int n) { thread_setting() = n; }

/// Runs fn(i) for i in [0, count). Each index is processed exactly once; callers
/// store results by index so output order never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const int threads = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace wlab
