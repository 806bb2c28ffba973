// Minimal thread-pool-free parallel loop used for the per-k assembly maps.
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace latcbc {

// Worker count. LATTICE_CBC_THREADS overrides the hardware default; a value
// of 1 forces fully serial execution. Results never depend on this setting:
// workers write disjoint index ranges and all reductions stay serial.
inline int& thread_count_ref() {
  static int count = [] {
    if (const char* env = std::getenv("LATTICE_CBC_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v >= 1 && v <= 1024) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }();
  return count;
}

inline int thread_count() { return thread_count_ref(); }
inline void set_thread_count(int count) { thread_count_ref() = std::max(1, count); }

// Calls fn(begin, end) on contiguous chunks covering [0, count). Serial when
// only one worker is configured or the range is too small to split.
template <class F>
void parallel_for(std::int64_t count, F&& fn) {
  const int workers = thread_count();
  constexpr std::int64_t kMinChunk = 2048;
  if (workers <= 1 || count < 2 * kMinChunk) {
    if (count > 0) fn(std::int64_t{0}, count);
    return;
  }
  const int chunks = static_cast<int>(std::min<std::int64_t>(workers, count / kMinChunk));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(chunks));
  const std::int64_t step = (count + chunks - 1) / chunks;
  for (int c = 0; c < chunks; ++c) {
    const std::int64_t lo = c * step;
    const std::int64_t hi = std::min<std::int64_t>(count, lo + step);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace latcbc
