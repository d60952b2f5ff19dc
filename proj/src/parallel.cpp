#include "gqlab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace gqlab {

int thread_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("GQLAB_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) hw = std::min(hw, cap);
  }
  return hw;
}

void parallel_for(std::int64_t count,
                  const std::function<void(std::int64_t, std::int64_t)>& body) {
  int nw = thread_count();
  if (nw <= 1 || count < 1024) {
    body(0, count);
    return;
  }
  std::int64_t chunk = (count + nw - 1) / nw;
  std::vector<std::thread> pool;
  for (int w = 0; w < nw; ++w) {
    std::int64_t lo = w * chunk;
    std::int64_t hi = std::min<std::int64_t>(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace gqlab
