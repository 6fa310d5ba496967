#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace latgas {

/// Execution knobs shared by the enumeration-heavy routines. The thread
/// count never changes a computed value.
struct ExecOptions {
  unsigned threads = 1;
};

/// Run f(i) for i in [0, count), split into contiguous chunks across at most
/// `threads` workers. The first exception thrown by any worker is rethrown.
template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::size_t lo = count * w / workers;
        const std::size_t hi = count * (w + 1) / workers;
        try {
          for (std::size_t i = lo; i < hi; ++i) f(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace latgas
