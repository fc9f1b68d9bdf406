#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace geotraj {

// Deterministic parallel map over [0, n): results depend only on the index,
// never on thread interleaving.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t nt = std::min<std::size_t>(threads, n);
  for (std::size_t t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += nt) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace geotraj
