#pragma once

#include <cstddef>
#include <functional>

namespace modloc {

// Worker count: MODLOC_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

// Runs fn(i) for i in [0, n). Each index is handled exactly once and results
// written per index, so output does not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace modloc
