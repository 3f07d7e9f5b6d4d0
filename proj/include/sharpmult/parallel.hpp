#pragma once

#include <cstddef>
#include <functional>

namespace sharpmult {

/// Number of worker threads to use. Honors SHARPMULT_THREADS when set to a
/// positive integer, otherwise the hardware concurrency.
unsigned thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, count). Chunk
/// boundaries depend only on count and thread_count(), so callers that
/// reduce per-chunk results in chunk order get reproducible sums.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace sharpmult
