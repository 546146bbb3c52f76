#pragma once

#include <cstddef>
#include <functional>

namespace msdet {

/// Caps worker threads for parallel_for. 0 restores the default
/// (hardware concurrency). Thread-safe.
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs body(i) for i in [0, n). Work is split into contiguous chunks, one
/// per worker; callers write results into pre-sized slots indexed by i, so
/// output is identical for every thread count. Exceptions from workers are
/// rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace msdet
