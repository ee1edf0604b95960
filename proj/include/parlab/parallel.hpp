#pragma once

#include <cstddef>
#include <functional>

namespace parlab::par {

// Worker count: PARLAB_WORKERS if set, else hardware concurrency. Worker
// count never affects numerical results: each index does its own local,
// fixed-order summation.
int worker_count();

// Runs fn(i) for i in [0, n), splitting indices across workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace parlab::par
