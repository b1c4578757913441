#pragma once

#include <cstddef>
#include <functional>

namespace lightcone {

/// Worker count: LIGHTCONE_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; work is
/// split into contiguous blocks so results written per index are deterministic.
/// The first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lightcone
