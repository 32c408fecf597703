#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace normlab {

/// Worker count from NORM_LAB_THREADS; unset, unparsable or 0 means one per core.
inline unsigned default_thread_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("NORM_LAB_THREADS");
  if (env == nullptr) return hw;
  try {
    const long v = std::stol(env);
    return v > 0 ? static_cast<unsigned>(v) : hw;
  } catch (const std::exception&) {
    return hw;
  }
}

/// Calls fn(i) for i in [0, count) on up to `threads` workers. Callers write
/// results by index, so output order never depends on scheduling. The first
/// exception thrown by any work item is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t count, const Fn& fn, unsigned threads = 0) {
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace normlab
