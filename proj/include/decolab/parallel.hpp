#ifndef DECOLAB_PARALLEL_HPP
#define DECOLAB_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace decolab {

/// Worker count from DECOLAB_THREADS, falling back to 1.
inline std::size_t thread_count() {
  if (const char *env = std::getenv("DECOLAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0)
        return static_cast<std::size_t>(v);
    } catch (const std::exception &) {
    }
  }
  return 1;
}

/// Runs fn(i) for i in [0, n). Each index is owned by exactly one worker, so
/// results written to slot i are deterministic regardless of thread count.
template <class Fn> void parallel_for(std::size_t n, Fn &&fn, std::size_t threads = thread_count()) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += threads)
          fn(i);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!err)
          err = std::current_exception();
      }
    });
  }
  for (auto &t : pool)
    t.join();
  if (err)
    std::rethrow_exception(err);
}

} // namespace decolab

#endif
