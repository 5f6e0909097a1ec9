#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace otkit {

namespace detail {
inline std::atomic<int>& thread_default() noexcept {
  static std::atomic<int> value{0};
  return value;
}
}  // namespace detail

// Worker-thread count used by parallel_for when the caller passes 0.
// Set once from the CLI / embedding application; 0 means "hardware default".
inline void set_default_threads(int n) noexcept {
  detail::thread_default().store(n, std::memory_order_relaxed);
}

// Resolve a requested thread count: <= 0 falls back to the configured
// default, then to std::thread::hardware_concurrency(), then to 1.
inline int effective_threads(int requested) noexcept {
  int n = requested;
  if (n <= 0) n = detail::thread_default().load(std::memory_order_relaxed);
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return n > 0 ? n : 1;
}

// Run fn(0) .. fn(n-1) on up to `threads` workers.
//
// The contract that keeps results independent of the worker count: fn(i)
// must write only to state owned by index i (its slot in a pre-sized output
// vector, typically).  Scheduling decides *when* each index runs, never
// *what* it computes, and reductions over the slots happen sequentially in
// index order afterwards.  The first exception thrown wins; remaining work
// is abandoned.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, int threads = 0) {
  if (n == 0) return;
  const int workers = effective_threads(threads);
  if (workers <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t i = cursor.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  const std::size_t count =
      std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  pool.reserve(count);
  for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace otkit
