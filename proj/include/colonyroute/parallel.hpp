#pragma once

#include <cstddef>
#include <functional>

namespace colonyroute {

/// Worker count: `requested` when non-zero, else COLONYROUTE_THREADS when set
/// to a positive value, else hardware concurrency.
unsigned resolve_threads(unsigned requested = 0);

/// Runs fn(i) for i in [0, n). Each index runs exactly once; callers write
/// results into per-index slots so output order never depends on scheduling.
/// The first exception thrown by any fn is rethrown after all workers join.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)> &fn);

} // namespace colonyroute
