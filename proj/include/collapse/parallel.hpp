#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace collapse {

inline unsigned default_thread_count() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

// Deterministic fan-out: items are grouped into fixed-size blocks, each block
// fills its own Partial accumulator, and the returned partials are ordered by
// block index.  The caller folds them sequentially, so results are identical
// for any thread count (including 1).  Work signature: void(item, Partial&).
template <class Partial, class Work>
std::vector<Partial> blocked_map(std::size_t n_items, std::size_t block_size, unsigned n_threads,
                                 Work work) {
  if (block_size == 0) block_size = 1;
  const std::size_t n_blocks = (n_items + block_size - 1) / block_size;
  std::vector<Partial> partials(n_blocks);
  if (n_blocks == 0) return partials;
  if (n_threads == 0) n_threads = default_thread_count();
  if (n_threads > n_blocks) n_threads = static_cast<unsigned>(n_blocks);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t blk = next.fetch_add(1);
      if (blk >= n_blocks) return;
      std::size_t lo = blk * block_size;
      std::size_t hi = std::min(lo + block_size, n_items);
      for (std::size_t i = lo; i < hi; ++i) work(i, partials[blk]);
    }
  };
  if (n_threads <= 1) {
    worker();
    return partials;
  }
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return partials;
}

}  // namespace collapse
