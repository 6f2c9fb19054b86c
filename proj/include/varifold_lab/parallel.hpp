#pragma once

#include <cstddef>
#include <functional>

namespace vlab {

/// Worker count: VARIFOLD_LAB_THREADS when set to a positive integer,
/// otherwise the hardware concurrency (at least 1).
unsigned worker_count();

/// Calls body(i) for every i in [0, n) on up to worker_count() threads.
/// Each index is visited exactly once; callers write results into
/// preallocated per-index slots so assembly order stays deterministic.
/// Nested calls from inside a worker run serially.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace vlab
