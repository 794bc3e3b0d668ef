#pragma once

#include <cstdint>
#include <functional>

namespace wasep {

// Fan a loop over [0, n_items) out to `jobs` worker threads in fixed-size
// blocks. Workers pull block indices from a shared counter, so results must
// be written to per-item or per-block slots; aggregation done in item order
// afterwards is independent of thread scheduling, which keeps reports
// bitwise reproducible for any --jobs value. jobs <= 1 runs inline.
// Exceptions from workers are captured and rethrown on the calling thread.
void parallel_blocks(std::int64_t n_items, int jobs, std::int64_t block_size,
                     const std::function<void(std::int64_t first, std::int64_t last)>& fn);

int default_jobs();

}  // namespace wasep
