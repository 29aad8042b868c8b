#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace framelab {

// Runs f(i) for i in [0, count) on up to `threads` workers. Work is handed
// out in fixed-size blocks claimed atomically; f must write its result into
// caller-owned, index-addressed storage. Combined with an index-ordered
// reduction on the caller side, results are independent of the thread count.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& f) {
  if (count == 0) return;
  const int workers =
      threads <= 0 ? static_cast<int>(std::thread::hardware_concurrency())
                   : threads;
  if (workers <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  const std::size_t block = 16;
  auto run = [&] {
    for (;;) {
      const std::size_t lo = cursor.fetch_add(block);
      if (lo >= count) return;
      const std::size_t hi = lo + block < count ? lo + block : count;
      for (std::size_t i = lo; i < hi; ++i) f(i);
    }
  };
  std::vector<std::thread> pool;
  const int spawn = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(workers), (count + block - 1) / block));
  pool.reserve(spawn);
  for (int t = 1; t < spawn; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

}  // namespace framelab
