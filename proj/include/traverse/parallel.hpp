// Deterministic data parallelism: chunked parallel_for over an index range.
// Worker count comes from TRAVERSE_THREADS (default: hardware concurrency);
// callers write into preallocated slots so results are order-independent.

#pragma once

#include <functional>

namespace traverse {

int worker_count();

// Runs fn(i) for i in [0, n); fn must only touch slot i of shared state.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace traverse
