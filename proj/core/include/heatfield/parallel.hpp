#pragma once

// Index-parallel loops over std::thread. The worker count comes from the
// HEATFIELD_THREADS environment variable, else hardware_concurrency().
// Every index is processed exactly once and results are written by index,
// so outputs do not depend on the thread count.

#include <cstddef>
#include <functional>

namespace heatfield {

int thread_count();

/// Calls body(i) for i in [0, n). The first exception thrown by any worker is
/// rethrown on the calling thread after all workers have stopped.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace heatfield
