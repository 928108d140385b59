#pragma once

#include <cstddef>
#include <functional>

namespace bgk {

// Number of worker threads: BGK_THREADS if set, else hardware concurrency.
int thread_budget();

// Runs fn(i) for i in [0, n); items must be independent. Results should be
// written into pre-sized slots so output order stays canonical.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace bgk
