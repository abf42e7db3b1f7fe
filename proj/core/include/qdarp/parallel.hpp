#pragma once

#include <cstddef>
#include <functional>

namespace qdarp {

/// Environment variable consulted for the default worker count.
inline constexpr const char* kWorkersEnvVar = "QDARP_WORKERS";

/// Worker count for `requested == 0`: $QDARP_WORKERS if set and positive,
/// otherwise std::thread::hardware_concurrency() (at least 1).
unsigned resolve_workers(unsigned requested = 0);

/// Calls task(i) for every i in [0, count) on up to `workers` threads.
/// Tasks must only write state owned by their index. If tasks throw, the
/// exception from the lowest failing index is rethrown after all workers
/// have stopped, so the reported failure does not depend on scheduling.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task);

}  // namespace qdarp
