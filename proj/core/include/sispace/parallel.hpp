#pragma once

#include <cstddef>
#include <functional>

namespace sispace {

/// Worker count for internal loops: SISPACE_THREADS if set and positive,
/// otherwise the hardware concurrency (at least 1).
unsigned worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, count). Chunks are
/// disjoint; the body must only write state owned by its chunk.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace sispace
