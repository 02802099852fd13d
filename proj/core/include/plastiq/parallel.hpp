#pragma once

#include <cstddef>
#include <functional>

namespace plastiq {

/// Worker count: PLASTIQ_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Indices are
/// split into contiguous blocks; callers write results into per-index slots
/// and reduce afterwards in index order, so results do not depend on the
/// thread count. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace plastiq
