// Copyright 2026 The batchlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BATCHLAB_UTIL_HPP_
#define BATCHLAB_UTIL_HPP_

#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace batchlab {

inline std::string fmt_g(double x, int precision = 12) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
  return buf;
}

// Runs fn(i) for i in [0, n) on a bounded pool. Work items must be
// independent; results must be written to pre-sized slots so that the output
// ordering is deterministic regardless of scheduling.
inline void parallel_for(int n, const std::function<void(int)>& fn,
                         int max_threads = 0) {
  if (max_threads <= 0) {
    max_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (max_threads <= 0) max_threads = 4;
  }
  int workers = std::min(n, max_threads);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace batchlab

#endif  // BATCHLAB_UTIL_HPP_
