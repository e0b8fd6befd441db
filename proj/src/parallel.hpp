#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace spiral::detail {

// Runs body(i) for i in [0, M) on up to `threads` workers. Each index writes
// only its own slot, so results do not depend on scheduling. The exception of
// the lowest failing index is rethrown.
template <class Body>
void parallel_samples(std::uint64_t M, int threads, Body body) {
  const auto workers = static_cast<std::uint64_t>(std::max(1, threads));
  if (workers == 1 || M < 2) {
    for (std::uint64_t i = 0; i < M; ++i) body(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::exception_ptr> errors(M);
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (std::uint64_t w = 0; w < std::min(workers, M); ++w) {
    pool.emplace_back([&] {
      for (std::uint64_t i = next++; i < M && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace spiral::detail
