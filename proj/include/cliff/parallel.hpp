#pragma once

#include <cstddef>
#include <functional>

namespace cliff {

// Execution knobs for per-node field loops. Work is split into contiguous
// chunks; each index is processed by exactly one thread, so results do not
// depend on the thread count.
struct Exec {
  int threads = 1;
};

void parallel_for(std::size_t count, const Exec& exec,
                  const std::function<void(std::size_t begin, std::size_t end)>& body);

}  // namespace cliff
