#pragma once

#include <cstddef>
#include <functional>

namespace textspot {

// Worker count from the TEXTSPOT_THREADS environment variable; 1 when unset
// or unparsable.
int default_thread_count();

// Runs fn(0..n-1) across up to `threads` workers. Results must be written to
// per-index slots so the outcome is independent of scheduling; the first
// worker exception is rethrown after all workers join.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

} // namespace textspot
