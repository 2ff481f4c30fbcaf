// Deterministic parallel-for: the index space is split into contiguous
// chunks, each worker writes only its own slots, and callers reduce in
// index order, so results are independent of the worker count.
#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lobflow {

template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& body) {
  if (n == 0) return;
  if (jobs == 0) jobs = 1;
  if (jobs > n) jobs = n;
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  const std::size_t chunk = (n + jobs - 1) / jobs;
  for (std::size_t w = 0; w < jobs; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

} // namespace lobflow
