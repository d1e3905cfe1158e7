#pragma once

#include <cstddef>
#include <functional>

namespace selfdual {

// Worker count: SELFDUAL_THREADS if set and positive, else the hardware
// concurrency (at least 1).
std::size_t worker_count();

// Runs body(i) for i in [0, n). Each index is visited exactly once; the body
// must only write state owned by its index, which keeps results independent
// of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace selfdual
