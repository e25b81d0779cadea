#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace potts {

// 0 means one worker per hardware thread.
inline unsigned resolve_threads(unsigned requested)
{
  if (requested != 0) {
    return requested;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(worker, begin, end) over contiguous chunks of [0, count).
// Chunk boundaries depend only on `count` and the worker count, and every
// index is visited exactly once, so callers that write disjoint outputs per
// index get results independent of scheduling. The first exception thrown by
// any worker is rethrown on the calling thread.
template <typename Body>
void parallel_chunks(std::size_t count, unsigned threads, Body &&body)
{
  unsigned const workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), count));
  if (workers <= 1) {
    if (count > 0) {
      body(0u, std::size_t{0}, count);
    }
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&](unsigned worker) {
    std::size_t const begin = count * worker / workers;
    std::size_t const end = count * (worker + 1) / workers;
    try {
      body(worker, begin, end);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) {
        failure = std::current_exception();
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) {
    pool.emplace_back(run, w);
  }
  run(0);
  for (auto &t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body &&body)
{
  parallel_chunks(count, threads, [&](unsigned, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      body(k);
    }
  });
}

} // namespace potts
