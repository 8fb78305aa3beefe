#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace cspsketch {

inline unsigned default_thread_count() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

// Runs chunk(begin, end) over a static partition of [0, count) and folds the
// per-chunk results in chunk order. The fold order is fixed, so results do
// not depend on the thread count as long as the reduction itself is
// insensitive to partition boundaries (true for min/argmin with a total
// order, which is how every caller uses this).
template <typename Result, typename ChunkFn, typename MergeFn>
Result parallel_reduce(uint64_t count, unsigned threads, Result identity,
                       ChunkFn&& chunk, MergeFn&& merge) {
  if (threads <= 1 || count < 4096) {
    Result r = chunk(uint64_t{0}, count);
    return merge(std::move(identity), std::move(r));
  }
  if (threads > count) threads = static_cast<unsigned>(count);
  std::vector<Result> partial(threads, identity);
  std::vector<std::thread> workers;
  workers.reserve(threads);
  const uint64_t step = count / threads;
  for (unsigned t = 0; t < threads; ++t) {
    uint64_t begin = t * step;
    uint64_t end = (t + 1 == threads) ? count : begin + step;
    workers.emplace_back([&, t, begin, end] { partial[t] = chunk(begin, end); });
  }
  for (auto& w : workers) w.join();
  Result out = std::move(identity);
  for (auto& p : partial) out = merge(std::move(out), std::move(p));
  return out;
}

}  // namespace cspsketch
