#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace ffdist {

/// Upper bound on worker threads; 0 means "hardware concurrency".
void set_worker_limit(unsigned limit);
unsigned worker_limit();

/// Runs task(i) for i in [0, count) on up to worker_limit() threads.
/// Each task must write only its own output slot.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

/// Splits [0, n) into a fixed number of chunks that does not depend on the
/// thread count, evaluates `chunk(begin, end)` for each and folds the
/// partial results in chunk order. Results are therefore identical for any
/// worker limit.
template <class T, class Chunk, class Merge>
T parallel_reduce(std::size_t n, T init, Chunk chunk, Merge merge,
                  std::size_t chunk_count = 64) {
  if (n == 0) return init;
  chunk_count = std::clamp<std::size_t>(chunk_count, 1, n);
  std::vector<T> partial(chunk_count, init);
  parallel_for(chunk_count, [&](std::size_t c) {
    std::size_t begin = n * c / chunk_count;
    std::size_t end = n * (c + 1) / chunk_count;
    partial[c] = chunk(begin, end);
  });
  T acc = std::move(init);
  for (auto& part : partial) acc = merge(std::move(acc), std::move(part));
  return acc;
}

}  // namespace ffdist
