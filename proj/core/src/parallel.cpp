#include "mvtm/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace mvtm {

int resolved_thread_count() {
  const char* env = std::getenv("MVTM_THREADS");
  if (env != nullptr && *env != '\0') {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
      // fall through to auto
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::int64_t count,
                  const std::function<void(std::int64_t)>& fn) {
  if (count <= 0) return;
  const int threads = std::min<std::int64_t>(resolved_thread_count(), count);
  if (threads <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace mvtm
