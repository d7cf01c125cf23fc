// Copyright 2026 The epipano Authors
// SPDX-License-Identifier: Apache-2.0

#include "epipano/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace epipano::parallel {

namespace {
std::atomic<int> g_threads{0};  // 0 means "not set yet"
}

void set_threads(int n) { g_threads.store(std::max(1, n)); }

int threads() {
  int n = g_threads.load();
  if (n == 0) {
    n = std::max(1u, std::thread::hardware_concurrency());
    g_threads.store(n);
  }
  return n;
}

void for_range(int64_t count, const std::function<void(int64_t, int64_t)>& fn) {
  if (count <= 0) return;
  const int n = std::min<int64_t>(threads(), count);
  if (n <= 1) {
    fn(0, count);
    return;
  }
  const int64_t chunk = (count + n - 1) / n;
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int64_t begin = i * chunk;
    const int64_t end = std::min<int64_t>(begin + chunk, count);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace epipano::parallel
