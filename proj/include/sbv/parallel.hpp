#pragma once

#include <cstddef>
#include <functional>

namespace sbv {

// Worker count: explicit override (--threads) wins, then SBV_THREADS, then
// hardware concurrency.
int thread_count();
void set_thread_count(int n);

// Runs fn(begin, end) over [0, n) split into grain-sized chunks. Chunk
// boundaries depend only on n and grain — never on worker count or
// scheduling — so per-index output slots are filled identically at any
// parallelism. Cross-chunk reductions must be done by the caller afterwards,
// sequentially in index order.
void parallel_for(std::size_t n, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace sbv
