#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sclab {

inline int effective_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Run fn(begin, end) over disjoint ranges covering [0, n). Workers pull
/// fixed-size chunks from an atomic cursor; because callers write results
/// into per-index slots, the output is identical for any worker count.
template <typename Fn>
void parallel_chunks(std::size_t n, int workers, Fn&& fn, std::size_t chunk = 4096) {
  workers = effective_workers(workers);
  if (n == 0) return;
  if (workers == 1 || n <= chunk) {
    fn(std::size_t{0}, n);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto body = [&] {
    try {
      while (true) {
        const std::size_t begin = cursor.fetch_add(chunk);
        if (begin >= n) break;
        fn(begin, std::min(begin + chunk, n));
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!error) error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace sclab
