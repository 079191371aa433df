#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace causal_econf::detail {

inline unsigned resolve_threads(unsigned requested, std::uint64_t trials) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(n, std::max<std::uint64_t>(trials, 1)));
}

// Splits [0, trials) into contiguous chunks, one per thread. `make_worker()` is
// called once per thread and must return a callable taking a trial index.
// Output placement is by trial index, so results are independent of the split.
template <typename MakeWorker>
void for_each_trial(std::uint64_t trials, unsigned threads, MakeWorker&& make_worker) {
  const unsigned workers = resolve_threads(threads, trials);
  if (workers <= 1) {
    auto worker = make_worker();
    for (std::uint64_t t = 0; t < trials; ++t) worker(t);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::uint64_t chunk = (trials + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = w * chunk;
    const std::uint64_t end = std::min(trials, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        auto worker = make_worker();
        for (std::uint64_t t = begin; t < end; ++t) worker(t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace causal_econf::detail
