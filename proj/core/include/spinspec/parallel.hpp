#pragma once

#include <cstddef>
#include <functional>

namespace spinspec {

// Worker count: SPINSPEC_THREADS if set (>= 1), else hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads. Results must
// be written to preallocated slots; the first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace spinspec
