#include "scmin/parallel.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>
#include <vector>

namespace scmin {

int resolve_workers(int workers) {
  if (workers < 0) throw std::invalid_argument("negative worker count");
  if (workers == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }
  return workers;
}

void parallel_blocks(int count, int workers,
                     const std::function<void(int, int)>& fn) {
  if (count <= 0) return;
  const int k = std::min(resolve_workers(workers), count);
  if (k == 1) {
    fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(k);
  const int base = count / k, extra = count % k;
  int begin = 0;
  for (int t = 0; t < k; ++t) {
    const int len = base + (t < extra ? 1 : 0);
    pool.emplace_back(fn, begin, begin + len);
    begin += len;
  }
  for (auto& th : pool) th.join();
}

}  // namespace scmin
