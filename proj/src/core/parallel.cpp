#include "cliff/parallel.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace cliff {

void parallel_for(std::size_t count, const Exec& exec,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t threads =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(exec.threads, 1)), count);
  if (threads <= 1) {
    if (count > 0) body(0, count);
    return;
  }
  // One slot per chunk so the reported error is the one from the lowest chunk.
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (count + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, t, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace cliff
