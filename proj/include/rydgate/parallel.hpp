#pragma once

#include <cstddef>
#include <functional>

namespace rydgate {

// Requested count if > 0, else $RYD_THREADS, else hardware concurrency.
int resolve_threads(int requested);

// Calls body(i) for i in [0, n) on up to `threads` workers. Each index must
// write only its own output slot; results are then independent of scheduling.
// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace rydgate
