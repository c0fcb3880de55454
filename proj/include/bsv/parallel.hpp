#pragma once
#include <cstddef>
#include <functional>

namespace bsv {

// Worker count used by parallel_for; 0 means hardware concurrency.
void set_threads(int n);
int threads();

// Runs body(i) for i in [0, n), split into contiguous chunks. Each index is
// visited exactly once, so bodies writing to disjoint slots stay deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t min_chunk = 256);

}  // namespace bsv
