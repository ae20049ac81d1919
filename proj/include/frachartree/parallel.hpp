#pragma once

#include <cstddef>
#include <functional>

namespace frachartree {

/// Worker count for internal parallel loops: FRACHARTREE_THREADS if set to a
/// positive integer, otherwise the hardware concurrency (at least 1).
unsigned thread_budget();

/// Runs body(i, worker) for i in [0, count) over at most thread_budget()
/// threads. Iterations are split into contiguous blocks, so results written
/// to per-index slots are deterministic. worker < number of threads used;
/// callers use it to index per-thread scratch. Exceptions from body are
/// rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t, unsigned)>& body);

/// Number of workers parallel_for would use for a loop of the given size.
unsigned worker_count(std::size_t count);

}  // namespace frachartree
