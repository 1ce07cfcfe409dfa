#pragma once

#include <cstddef>
#include <functional>

namespace mbsp {

// Worker count: MBSP_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_limit();

// Runs body(0..count-1) on up to `workers` threads. Each index runs exactly
// once; callers write results into per-index slots so the outcome does not
// depend on scheduling. If any body throws, the exception from the lowest
// failing index is rethrown after all workers finish.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace mbsp
