#pragma once

#include <cstddef>
#include <functional>

namespace speckle {

/// Worker count: requested if > 0, else SPECKLE_RNG_THREADS, else hardware.
int resolve_threads(int requested);

/// Runs fn(i) for i in [0, n) over a fixed block partition. Callers must
/// write results into index-addressed slots; the partition never feeds one
/// result into another, so output is identical for every thread count.
void parallel_for(size_t n, int threads, const std::function<void(size_t)>& fn);

}  // namespace speckle
