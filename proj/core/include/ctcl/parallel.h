// Copyright 2026 The CTCL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CTCL_PARALLEL_H_
#define CTCL_PARALLEL_H_

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ctcl {

// Process-wide worker count. Outputs must be byte-identical for any value;
// workers may only write to disjoint, index-addressed slots.
int WorkerThreads();
void SetWorkerThreads(int threads);

// Runs fn(i) for i in [0, n). Work is handed out in fixed-size chunks so the
// set of (chunk -> indices) pairs does not depend on the thread count; any
// reduction the caller performs afterwards must be in index order.
template <typename Fn>
void ParallelFor(int64_t n, Fn&& fn, int64_t chunk = 16) {
  const int threads = WorkerThreads();
  if (n <= 0) return;
  if (threads <= 1 || n <= chunk) {
    for (int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next_chunk{0};
  const int64_t num_chunks = (n + chunk - 1) / chunk;
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    try {
      while (true) {
        const int64_t c = next_chunk.fetch_add(1);
        if (c >= num_chunks) return;
        const int64_t begin = c * chunk;
        const int64_t end = std::min(n, begin + chunk);
        for (int64_t i = begin; i < end; ++i) fn(i);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  const int spawn = static_cast<int>(
      std::min<int64_t>(threads, num_chunks));
  pool.reserve(static_cast<size_t>(spawn));
  for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ctcl

#endif  // CTCL_PARALLEL_H_
