#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace gsbmi {

/// Runs fn(i) for i in [0, n) across a pool of worker threads. Work items
/// are claimed by index from a shared counter, so each index runs exactly
/// once; callers must write results into per-index slots to keep the outcome
/// independent of thread count. n_threads == 1 (or n <= 1) runs inline.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned n_threads = 0) {
  if (n_threads == 0) n_threads = std::thread::hardware_concurrency();
  if (n_threads == 0) n_threads = 1;
  if (n_threads == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(n_threads, n));
  pool.reserve(spawn);
  for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace gsbmi
