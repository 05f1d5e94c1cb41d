#pragma once

#include <cstddef>
#include <functional>

namespace drsplit {

/// Number of worker threads used by per-pixel kernels. 1 (the default) is
/// the deterministic single-threaded mode.
void set_num_threads(int n);
int num_threads();

/// Splits [0, n) into contiguous chunks and runs body(begin, end) on each.
/// Chunks write disjoint ranges, so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace drsplit
