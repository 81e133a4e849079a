#pragma once

#include <cstddef>
#include <functional>

namespace radialwave {

/// Worker count used by the parallel sweeps (default 1).
void set_thread_count(unsigned n);
unsigned thread_count();

/// Number of fixed work chunks; chunking never depends on the thread count so
/// reductions performed chunk by chunk are bitwise reproducible.
inline constexpr std::size_t kWorkChunks = 16;

/// Calls `body(chunk, begin, end)` for the kWorkChunks contiguous pieces of [0, n).
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

/// Calls `body(i)` for i in [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace radialwave
