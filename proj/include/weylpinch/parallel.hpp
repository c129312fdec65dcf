#ifndef WEYLPINCH_PARALLEL_HPP
#define WEYLPINCH_PARALLEL_HPP

#include <cstdlib>
#include <thread>
#include <vector>

namespace weylpinch {

/// Worker count: WEYLPINCH_THREADS caps parallelism, 0 or unset = auto.
inline unsigned thread_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("WEYLPINCH_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return hw;
}

/// Static chunked parallel loop. Workers write to disjoint indices only,
/// so results are bitwise independent of the schedule.
template <class F>
void parallel_for(std::size_t n, const F& body) {
  unsigned workers = thread_count();
  if (workers <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  workers = std::min<std::size_t>(workers, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

} // namespace weylpinch

#endif
