#pragma once

#include <cstddef>
#include <functional>

namespace revsphere {

// Worker count: hardware concurrency, capped by REVSPHERE_THREADS when set.
std::size_t worker_count();

// Runs body(i) for i in [0, count). Each index is visited exactly once; callers
// write results into per-index slots, so output does not depend on scheduling.
// The exception from the lowest failing index is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace revsphere
