#pragma once

#include <cstddef>
#include <functional>

namespace edgelaw {

// Worker count: EDGELAW_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();
void set_thread_count(unsigned n);  // 0 restores the default

// Runs body(i) for i in [0, n) on up to thread_count() threads. The first
// exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace edgelaw
