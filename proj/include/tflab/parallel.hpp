#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace tflab {

/// Worker count: TFLAB_THREADS when set, otherwise the hardware concurrency.
std::size_t worker_count();
/// Overrides the worker count for subsequent parallel calls (0 restores the default).
void set_worker_count(std::size_t n);

/// Runs body(chunk) for chunk in [0, chunks). Chunks are claimed dynamically but each
/// chunk's work is fixed, so callers get worker-count independent results.
void parallel_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body);

/// Fixed chunking of [0, n): results depend on n only.
constexpr std::size_t kChunk = 4096;
inline std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

/// Sum of partial(begin, end) over fixed chunks of [0, n), added in chunk order.
double parallel_sum(std::size_t n, const std::function<double(std::size_t, std::size_t)>& partial);

}  // namespace tflab
