#pragma once

#include <cstdint>
#include <functional>

namespace regmix {

/// Global worker count used by parallel_chunks. Defaults to the hardware
/// concurrency; the CLI sets it from --threads / REGMIX_THREADS.
int num_threads();
void set_num_threads(int threads);

/// Splits [0, n) into fixed-size chunks whose boundaries depend only on n,
/// never on the worker count, and calls fn(chunk_index, begin, end) for each.
/// Callers that reduce must combine per-chunk partials in chunk order; results
/// are then bit-stable for any thread count.
void parallel_chunks(std::int64_t n,
                     const std::function<void(int, std::int64_t, std::int64_t)>& fn);

/// Number of chunks parallel_chunks will use for a range of length n.
int chunk_count(std::int64_t n);

}  // namespace regmix
