#pragma once

// Chunked fork-join over index ranges. Work is split into fixed chunks and the
// per-chunk results are combined in chunk order, so results never depend on the
// number of threads.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace derange {

inline std::atomic<unsigned>& default_jobs() {
  static std::atomic<unsigned> jobs{1};
  return jobs;
}

inline void set_default_jobs(unsigned jobs) { default_jobs().store(std::max(1u, jobs)); }

namespace detail {
inline bool& inside_worker() {
  thread_local bool flag = false;
  return flag;
}
}  // namespace detail

/// Runs body(i) for i in [0, n). Nested calls from a worker run serially.
template <class Body>
void parallel_for(std::size_t n, Body&& body, unsigned jobs = default_jobs().load()) {
  if (n == 0) return;
  if (jobs <= 1 || n == 1 || detail::inside_worker()) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    detail::inside_worker() = true;
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
    detail::inside_worker() = false;
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Sum of chunk(begin, end) over a fixed partition of [0, n).
template <class Chunk>
std::uint64_t parallel_sum(std::size_t n, Chunk&& chunk, unsigned jobs = default_jobs().load()) {
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> partial(chunks, 0);
  parallel_for(
      chunks, [&](std::size_t c) { partial[c] = chunk(c * kChunk, std::min(n, (c + 1) * kChunk)); }, jobs);
  std::uint64_t total = 0;
  for (auto v : partial) total += v;
  return total;
}

}  // namespace derange
