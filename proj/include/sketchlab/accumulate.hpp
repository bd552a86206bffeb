// Copyright 2026 The Sketchlab Authors.
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

#include <condition_variable>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace sketchlab {

// Fixed-order pairwise (binary-counter) summation. Feeding values in index
// order yields a summation tree that depends only on the count, never on
// thread scheduling, so parallel Monte Carlo means are bit-stable. Works for
// scalars and Eigen matrices alike; T needs operator+= and copy.
template <class T>
class PairwiseAccumulator {
 public:
  void add(T value) {
    std::size_t level = 0;
    // Carry propagation: level i holds the sum of 2^i consecutive items.
    while (level < filled_.size() && filled_[level]) {
      value += levels_[level];
      filled_[level] = false;
      ++level;
    }
    if (level == filled_.size()) {
      levels_.push_back(std::move(value));
      filled_.push_back(true);
    } else {
      levels_[level] = std::move(value);
      filled_[level] = true;
    }
    ++count_;
  }

  std::size_t count() const { return count_; }

  // Folds partial sums lowest level first (fixed order). Requires count > 0.
  T total() const {
    std::size_t level = 0;
    while (!filled_[level]) ++level;
    T sum = levels_[level];
    for (++level; level < filled_.size(); ++level)
      if (filled_[level]) sum += levels_[level];
    return sum;
  }

 private:
  std::vector<T> levels_;
  std::vector<bool> filled_;
  std::size_t count_ = 0;
};

// Thread budget for Monte Carlo trials: SKETCHLAB_THREADS, default 1.
inline unsigned trial_thread_count() {
  const char* env = std::getenv("SKETCHLAB_THREADS");
  if (env == nullptr) return 1;
  const long parsed = std::strtol(env, nullptr, 10);
  if (parsed < 1) return 1;
  return static_cast<unsigned>(parsed);
}

// Runs worker(t) for t in [0, count) on `threads` threads and hands results
// to consume(t, result) strictly in ascending t on the calling thread, so
// any fixed-order reduction stays deterministic under parallelism. Memory is
// bounded by a sliding window of pending results.
template <class Result, class Worker, class Consumer>
void ordered_parallel_for(std::size_t count, unsigned threads, Worker worker,
                          Consumer consume) {
  if (count == 0) return;
  if (threads <= 1) {
    for (std::size_t t = 0; t < count; ++t) consume(t, worker(t));
    return;
  }

  std::mutex mu;
  std::condition_variable room, ready;
  std::map<std::size_t, Result> done;
  std::size_t next_claim = 0;
  std::size_t next_consume = 0;
  const std::size_t window = 2 * static_cast<std::size_t>(threads);

  auto body = [&] {
    for (;;) {
      std::size_t t;
      {
        std::unique_lock<std::mutex> lock(mu);
        if (next_claim >= count) return;
        t = next_claim++;
        room.wait(lock, [&] { return t < next_consume + window; });
      }
      Result r = worker(t);
      {
        std::lock_guard<std::mutex> lock(mu);
        done.emplace(t, std::move(r));
      }
      ready.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(body);

  for (; next_consume < count;) {
    std::unique_lock<std::mutex> lock(mu);
    ready.wait(lock, [&] { return done.count(next_consume) > 0; });
    auto node = done.extract(next_consume);
    lock.unlock();
    consume(next_consume, std::move(node.mapped()));
    {
      std::lock_guard<std::mutex> relock(mu);
      ++next_consume;
    }
    room.notify_all();
  }
  for (auto& th : pool) th.join();
}

}  // namespace sketchlab
