#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace psq {

// Splits [begin, end) into `jobs` contiguous chunks and runs
// fn(chunk_index, lo, hi) on its own thread. Callers merge per-chunk
// results in chunk order, so output is deterministic for a fixed jobs
// count regardless of scheduling.
inline void parallel_chunks(uint64_t begin, uint64_t end, unsigned jobs,
                            const std::function<void(unsigned, uint64_t, uint64_t)>& fn) {
  if (end <= begin) return;
  const uint64_t total = end - begin;
  if (jobs <= 1 || total < 2 * jobs) {
    fn(0, begin, end);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  const uint64_t chunk = (total + jobs - 1) / jobs;
  for (unsigned c = 0; c < jobs; ++c) {
    uint64_t lo = begin + c * chunk;
    uint64_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([&fn, c, lo, hi] { fn(c, lo, hi); });
  }
  for (auto& w : workers) w.join();
}

inline unsigned default_jobs() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

}  // namespace psq
