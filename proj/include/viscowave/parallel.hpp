#pragma once

// Order-preserving parallel map over a bounded pool of std::threads.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace viscowave {

/// Number of workers to use for `requested` (0 = hardware concurrency).
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Applies fn to every element of `in`; out[i] = fn(in[i]) regardless of scheduling. The first
/// exception thrown by any worker (in index order) is rethrown after all workers finish.
template <class T, class Fn>
auto parallel_map(const std::vector<T>& in, Fn&& fn, unsigned threads = 0)
    -> std::vector<std::decay_t<decltype(fn(in.front()))>> {
  using R = std::decay_t<decltype(fn(in.front()))>;
  std::vector<R> out(in.size());
  const unsigned workers =
      std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(in.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = fn(in[i]);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = in.size();
  std::exception_ptr error;
  auto work = [&] {
    for (std::size_t i = next++; i < in.size(); i = next++) {
      try {
        out[i] = fn(in[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace viscowave
