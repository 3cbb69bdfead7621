/// @file parallel.hpp
/// @brief Static-partition parallel loop over an index range.
#pragma once

#include <functional>

namespace monokin {

/// Worker count: the last value passed to set_thread_count, else the
/// MONOKIN_THREADS environment variable, else 1.
int thread_count();
void set_thread_count(int n);

/// Calls body(i) for i in [0, n). Each index runs exactly once; the first
/// exception thrown by any worker is rethrown after all workers join.
void parallel_for(int n, const std::function<void(int)>& body, int threads = 0);

}  // namespace monokin
