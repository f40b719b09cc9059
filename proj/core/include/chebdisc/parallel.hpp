#pragma once

#include <cstddef>
#include <functional>

namespace chebdisc {

/// Number of worker threads used by parallel_for (defaults to hardware concurrency).
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Calls fn(i) for every i in [0, n). Work is distributed over the configured
/// threads; fn must only write to state owned by index i. Exceptions thrown by
/// fn are rethrown (first one wins) after all workers joined.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace chebdisc
