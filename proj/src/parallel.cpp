#include "bsv/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace bsv {

namespace {
std::atomic<int> g_threads{0};
}

void set_threads(int n) { g_threads = std::max(0, n); }

int threads() {
  int n = g_threads.load();
  if (n > 0) return n;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t min_chunk) {
  std::size_t workers = static_cast<std::size_t>(threads());
  if (min_chunk == 0) min_chunk = 1;
  workers = std::min(workers, (n + min_chunk - 1) / min_chunk);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace bsv
