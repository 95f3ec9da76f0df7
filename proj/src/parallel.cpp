#include "sgt/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace sgt {

unsigned worker_count(unsigned requested) {
  unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SGT_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) w = std::min<unsigned>(w, static_cast<unsigned>(cap));
  }
  return std::max(1u, w);
}

void parallel_for(uint64_t n, unsigned workers, const std::function<void(uint64_t)>& fn) {
  if (n == 0) return;
  workers = std::max(1u, workers);
  if (workers == 1 || n == 1) {
    for (uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  workers = static_cast<unsigned>(std::min<uint64_t>(workers, n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr err;
  std::mutex err_mu;
  const uint64_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const uint64_t lo = w * chunk;
    const uint64_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi] {
      try {
        for (uint64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace sgt
