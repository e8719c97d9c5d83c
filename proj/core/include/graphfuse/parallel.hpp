#pragma once

#include <cstddef>
#include <functional>

namespace graphfuse {

// Worker cap: GRAPHFUSE_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Calls fn(i) for i in [0, count) on up to `workers` threads. Each index runs
// exactly once; the first exception thrown is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  std::size_t workers = worker_count());

}  // namespace graphfuse
