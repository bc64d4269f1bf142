#pragma once

#include <cstddef>
#include <functional>

namespace segfuse {

// Runs fn(i) for every i in [0, count) on up to `jobs` threads. Callers
// must write results to independent slots; invocation order is unspecified,
// so anything downstream has to be order-independent. The first exception
// thrown by any invocation is rethrown on the calling thread.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& fn);

// Number of hardware threads, at least 1.
int default_jobs();

}  // namespace segfuse
