// Copyright (c) 2026 quantc authors
// SPDX-License-Identifier: Apache-2.0

#include "quantc/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace quantc {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QUANTC_WORKERS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(size_t n, int workers, const std::function<void(size_t)>& fn) {
  if (n == 0) return;
  int w = std::min<size_t>(static_cast<size_t>(resolve_workers(workers)), n);
  if (w <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::vector<std::pair<size_t, std::exception_ptr>> errors;
  std::mutex errors_mutex;
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(w));
  for (int t = 0; t < w; ++t) {
    threads.emplace_back([&, t]() {
      // Static stride partition: worker t owns indices t, t+w, t+2w, ...
      for (size_t i = static_cast<size_t>(t); i < n; i += static_cast<size_t>(w)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(errors_mutex);
          errors.emplace_back(i, std::current_exception());
        }
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (!errors.empty()) {
    std::sort(errors.begin(), errors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::rethrow_exception(errors.front().second);
  }
}

}  // namespace quantc
