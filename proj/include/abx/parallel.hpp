#pragma once

#include <cstddef>
#include <functional>

namespace abx {

/** Worker count: hardware concurrency, capped by the ABX_THREADS environment variable. */
unsigned worker_count();

/** Run fn(i) for i in [0, n) on up to worker_count() threads. The first exception is rethrown. */
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace abx
