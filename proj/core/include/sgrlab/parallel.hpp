#pragma once

#include <cstddef>
#include <functional>

namespace sgrlab {

/// Worker count from SGRLAB_THREADS, or all hardware threads when unset.
unsigned default_workers();

/// Calls task(i) for every i in [0, count) on up to `workers` threads.
/// Tasks must write only to slot i of caller-owned storage; the first
/// exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task,
                  unsigned workers = default_workers());

}  // namespace sgrlab
