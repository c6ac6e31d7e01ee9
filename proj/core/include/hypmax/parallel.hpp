#pragma once

#include <cstddef>
#include <functional>

namespace hypmax {

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 means the
/// hardware concurrency). Work is claimed dynamically, so callers that need
/// reproducible output must write results by index and merge in index order.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

int default_thread_count();

}  // namespace hypmax
