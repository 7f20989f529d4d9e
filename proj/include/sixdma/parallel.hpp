#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sixdma {

/// Process-wide worker count used when a caller passes threads = 0.
inline std::atomic<int>& default_threads() {
  static std::atomic<int> n{1};
  return n;
}

/// Runs fn(i) for i in [0, count). Work is handed out dynamically; callers
/// write results into per-index slots so the reduction order stays fixed.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, int threads = 0) {
  if (threads <= 0) threads = default_threads().load();
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace sixdma
