#pragma once

#include <cstddef>
#include <functional>

namespace coreset {

/// Global worker-thread count. 0 = use hardware concurrency. Parallel loops
/// only ever fill disjoint output slots, so results do not depend on it.
void set_thread_count(int threads);
int thread_count();

/// Runs fn(i) for i in [0, n), split over the configured threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace coreset
