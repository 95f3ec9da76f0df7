#pragma once

#include <cstdint>
#include <functional>

namespace sgt {

// Worker count: `requested` if nonzero, else hardware concurrency, both
// capped by the SGT_THREADS environment variable when it is set.
unsigned worker_count(unsigned requested = 0);

// Runs fn(i) for i in [0, n). Chunked static partition; with workers <= 1 the
// loop runs inline. Callers keep determinism by writing to per-index slots.
void parallel_for(uint64_t n, unsigned workers, const std::function<void(uint64_t)>& fn);

}  // namespace sgt
