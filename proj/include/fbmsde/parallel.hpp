#pragma once

#include <cstddef>
#include <functional>

namespace fbmsde {

/// Worker count: hardware concurrency, capped by FBM_SDE_THREADS when set to
/// a positive integer.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on up to `workers` threads with static
/// contiguous partitioning. Callers write to per-index slots so results do not
/// depend on the worker count. The first exception thrown by any body is
/// rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, std::size_t workers = 0);

}  // namespace fbmsde
