#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bandeig {

/// Worker budget for slice-level and node-level parallelism. Controlled via
/// the BANDEIG_WORKERS environment variable; defaults to the hardware
/// concurrency. Node-level parallelism is additionally capped at 16.
inline int worker_count() {
  if (const char* env = std::getenv("BANDEIG_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs fn(i) for i in [0, count). Results must be written to pre-sized slots
/// so the outcome is identical regardless of the worker count.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn, int max_workers = -1) {
  std::size_t workers = static_cast<std::size_t>(worker_count());
  if (max_workers > 0) workers = std::min(workers, static_cast<std::size_t>(max_workers));
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (std::size_t t = 0; t < workers; ++t)
    pool.emplace_back([&, t]() {
      try {
        for (std::size_t i = t; i < count; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace bandeig
