#pragma once

#include <cstddef>
#include <functional>

namespace hopscatter::core {

/// Worker cap: HOPSCATTER_THREADS if set, otherwise hardware concurrency.
std::size_t worker_limit();

/// Runs fn(i) for i in [0, n) across up to worker_limit() threads. fn must be
/// safe to call concurrently for distinct indices. Falls back to a serial loop
/// when the limit is 1 or n is small.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hopscatter::core
