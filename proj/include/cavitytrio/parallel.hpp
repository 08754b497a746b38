#pragma once

#include <cstddef>
#include <functional>

namespace cavitytrio::parallel {

/// Maximum worker count for sweep parallelism. Defaults to the hardware
/// concurrency, capped by the CAVITY_TRIO_THREADS environment variable when
/// set. A cap of 1 runs everything on the calling thread.
std::size_t thread_cap();

/// Overrides the cap for the current process (0 restores the default).
void set_thread_cap(std::size_t cap);

/// Runs fn(i) for i in [0, count) on up to thread_cap() workers. Work items
/// must be independent; results should be written to pre-sized slots so the
/// output order is deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace cavitytrio::parallel
