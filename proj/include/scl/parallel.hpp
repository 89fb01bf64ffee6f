#ifndef SCL_PARALLEL_HPP
#define SCL_PARALLEL_HPP

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace scl {

inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Static contiguous split of [begin, end) over `workers` threads.
// chunk_body(lo, hi) owns indices [lo, hi); per-chunk scratch state lives
// inside the body, so results are independent of the worker count and
// runs stay bit-reproducible.
template <class ChunkBody>
void parallel_chunks(long begin, long end, int workers, ChunkBody&& chunk_body) {
  const long count = end - begin;
  if (count <= 0) return;
  const int nw = static_cast<int>(std::min<long>(resolve_workers(workers), count));
  if (nw <= 1) {
    chunk_body(begin, end);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(nw);
  std::exception_ptr error;
  std::mutex error_mutex;
  const long chunk = (count + nw - 1) / nw;
  for (int w = 0; w < nw; ++w) {
    const long lo = begin + w * chunk;
    const long hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([lo, hi, &chunk_body, &error, &error_mutex] {
      try {
        chunk_body(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

template <class Body>
void parallel_for(long begin, long end, int workers, Body&& body) {
  parallel_chunks(begin, end, workers, [&body](long lo, long hi) {
    for (long i = lo; i < hi; ++i) body(i);
  });
}

}  // namespace scl

#endif  // SCL_PARALLEL_HPP
