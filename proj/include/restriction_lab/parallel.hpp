#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rlab {

// Worker count: hardware concurrency, capped by RESTRICTION_LAB_THREADS.
int max_threads();

// Runs body(i) for i in [0, n) on up to max_threads() threads. The index
// space is split into fixed contiguous chunks, so any reduction the caller
// performs over per-index results is independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Sum of f(i) over [0, n), accumulated per index then added in index order.
double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& f);

}  // namespace rlab
