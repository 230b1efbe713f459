#pragma once

#include <cstddef>
#include <functional>

namespace mfcomp {

// Worker count: the MFCOMP_THREADS environment variable if set to a positive
// integer, otherwise the hardware concurrency.
std::size_t resolve_thread_count();

// Runs fn(0..count-1) on up to `threads` workers. Each index is processed
// exactly once and writes only its own slot, so results do not depend on the
// worker count. The first exception thrown by a worker is rethrown.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

} // namespace mfcomp
