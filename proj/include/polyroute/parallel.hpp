#pragma once

#include <cstddef>
#include <functional>

namespace polyroute {

/// Worker count: hardware concurrency, capped by POLYROUTE_THREADS when set.
unsigned thread_count();

/// Calls fn(i) for i in [0, n) on up to thread_count() threads. fn must only
/// write to per-index state. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace polyroute
