#pragma once

#include <cstddef>
#include <functional>

namespace plate {

/// Number of worker threads: hardware concurrency, capped by PLATE_THREADS.
[[nodiscard]] int worker_count();

/// Splits [0, n) into contiguous chunks, one per worker, and runs
/// body(chunk_index, begin, end). Chunk boundaries depend only on n and the
/// worker count, so per-chunk reductions merged in chunk order are
/// reproducible for a fixed thread count.
void parallel_chunks(std::size_t n,
                     const std::function<void(int, std::size_t, std::size_t)>& body);

[[nodiscard]] int chunk_count(std::size_t n);

}  // namespace plate
