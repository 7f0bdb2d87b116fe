/*
 * Copyright 2026 The coinbox Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace coinbox {

/// Worker count from the THREADS environment variable; default 1.
inline unsigned thread_count() {
  if (const char* env = std::getenv("THREADS")) {
    long n = std::atol(env);
    if (n >= 1 && n <= 256) return unsigned(n);
  }
  return 1;
}

/** Splits [0, n) into contiguous chunks, maps each chunk on a worker, then
    folds the chunk results in chunk order. The fold order is fixed, so the
    result is independent of the worker count. */
template <typename R, typename MapChunk, typename Fold>
R parallel_chunks(std::uint64_t n, unsigned workers, R init, MapChunk map_chunk, Fold fold) {
  if (n == 0) return init;
  if (workers <= 1) return fold(std::move(init), map_chunk(0, n));

  const std::uint64_t chunks = std::min<std::uint64_t>(workers * 4, n);
  std::vector<R> results(chunks, init);
  std::vector<std::thread> pool;
  std::atomic<std::uint64_t> next{0};
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::uint64_t c = next.fetch_add(1);
        if (c >= chunks) return;
        std::uint64_t lo = n * c / chunks, hi = n * (c + 1) / chunks;
        if (lo < hi) results[c] = map_chunk(lo, hi);
      }
    });
  }
  for (auto& t : pool) t.join();
  R acc = std::move(init);
  for (auto& r : results) acc = fold(std::move(acc), std::move(r));
  return acc;
}

}  // namespace coinbox
