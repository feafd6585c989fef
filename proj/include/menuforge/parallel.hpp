// Copyright 2026 The Menuforge Authors
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

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace menuforge {

// Worker count for embarrassingly parallel inner loops; 0 means hardware concurrency.
void set_num_threads(int threads);
int num_threads();

// Splits [0, count) into fixed chunks of `chunk` items and returns
// fn(begin, end) for every chunk, in chunk order. Chunk boundaries do not
// depend on the worker count, so reducing the results in order gives the same
// answer for any thread setting.
template <typename Fn>
auto map_chunks(std::size_t count, std::size_t chunk, Fn fn) {
  using R = decltype(fn(std::size_t{0}, std::size_t{0}));
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t nchunks = (count + chunk - 1) / chunk;
  std::vector<R> out(nchunks);
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(num_threads()), nchunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c) {
      out[c] = fn(c * chunk, std::min(count, (c + 1) * chunk));
    }
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= nchunks) return;
        try {
          out[c] = fn(c * chunk, std::min(count, (c + 1) * chunk));
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          next.store(nchunks);
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace menuforge
