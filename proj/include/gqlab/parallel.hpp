#pragma once

#include <cstdint>
#include <functional>

namespace gqlab {

// Worker count: min(hardware, GQLAB_THREADS if set). At least 1.
int thread_count();

// Static block partition of [0, count) over workers. Each chunk is processed
// in index order inside one worker, so per-index results are deterministic.
void parallel_for(std::int64_t count,
                  const std::function<void(std::int64_t, std::int64_t)>& body);

}  // namespace gqlab
