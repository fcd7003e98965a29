#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace blab {

/// Worker count: BLAB_THREADS when set to a positive integer, otherwise the
/// hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("BLAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, n) into contiguous chunks, maps each chunk on its own worker and
/// folds the partial results in chunk order. With an associative `reduce` the
/// outcome does not depend on the worker count.
template <class T, class Map, class Reduce>
T parallel_reduce(std::size_t n, T init, Map map, Reduce reduce, unsigned workers = worker_count()) {
  workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1)));
  if (workers == 1) {
    return reduce(std::move(init), map(std::size_t{0}, n));
  }
  std::vector<T> partial(workers, init);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    threads.emplace_back([&, w, begin, end] {
      try {
        partial[w] = map(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  T acc = std::move(init);
  for (auto& p : partial) acc = reduce(std::move(acc), std::move(p));
  return acc;
}

}  // namespace blab
