#pragma once

#include <functional>

namespace scmin {

// Splits [0, count) into contiguous blocks and runs fn(begin, end) on up to
// `workers` threads (0 = hardware concurrency).  Callers keep determinism by
// writing per-index results and reducing sequentially afterwards, so the
// outcome never depends on the partitioning.
void parallel_blocks(int count, int workers,
                     const std::function<void(int, int)>& fn);

int resolve_workers(int workers);

}  // namespace scmin
