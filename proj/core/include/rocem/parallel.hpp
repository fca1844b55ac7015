#pragma once

#include <cstddef>
#include <functional>

namespace rocem {

/// Worker-thread budget: `requested` if positive, else the ROCEM_THREADS
/// environment variable, else hardware concurrency. Never returns 0.
unsigned thread_budget(unsigned requested = 0);

/// Runs fn(i) for i in [0, n). Jobs must be independent and write their
/// results to preallocated per-index slots, so the outcome does not depend on
/// scheduling. With n_threads == 1 (or n <= 1) runs inline on the caller.
/// The first exception thrown by a job is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned n_threads);

} // namespace rocem
