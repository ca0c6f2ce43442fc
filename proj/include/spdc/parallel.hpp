#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace spdc {

/// Worker cap for scans. 0 means std::thread::hardware_concurrency().
struct ExecutionPolicy {
  unsigned threads = 0;

  unsigned resolved() const {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return threads == 0 ? hw : threads;
  }
};

/// Calls body(i) for i in [0, n). Each index is handled exactly once, so a
/// body that writes only slot i yields results independent of thread count.
/// The exception from the lowest failing index is rethrown.
template <class Body>
void parallel_for(std::size_t n, const ExecutionPolicy& policy, Body&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(policy.resolved(), std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_index = n;
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace spdc
