#pragma once

#include <cstddef>
#include <functional>

namespace tailwave {

/// Worker count: TAILWAVE_THREADS if set (>= 1), otherwise 1.
int thread_count();

/// Override the worker count for this process (0 restores the env default).
void set_thread_count(int n);

/// Runs body(begin, end) over contiguous chunks of [0, n).  Chunking only
/// changes which thread handles an index, never the arithmetic done for it,
/// so results are bit-identical for any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace tailwave
