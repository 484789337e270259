#pragma once

#include <cstddef>
#include <functional>

namespace csuq {

/// Worker count: hardware concurrency, capped by the CSUQ_THREADS environment variable.
std::size_t default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index runs
/// exactly once; callers write results into per-index slots, so output order
/// never depends on scheduling. The first exception thrown by any body is
/// rethrown after all workers have joined.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace csuq
