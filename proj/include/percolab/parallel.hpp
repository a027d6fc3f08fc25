/*
   Copyright 2026 The percolab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace percolab {

/// Deterministic trial-parallel map/reduce. Trials are keyed by index, each
/// worker folds a contiguous chunk into its own accumulator, and accumulators
/// are merged in worker order, so the result is identical for any worker
/// count as long as the merge is associative (all accumulators here are
/// integer counters, so it is).
class Parallel {
 public:
  explicit Parallel(int workers = 0) {
    if (workers <= 0) {
      unsigned hw = std::thread::hardware_concurrency();
      workers = hw == 0 ? 1 : static_cast<int>(hw);
    }
    workers_ = workers;
  }

  int workers() const { return workers_; }

  /// fn(trial, acc) for trial in [0, n); returns the ordered merge of the
  /// per-worker accumulators.
  template <class Acc, class Fn, class Merge>
  Acc run(std::uint64_t n, Fn&& fn, Merge&& merge) const {
    int w = workers_;
    if (w == 1 || n < 2) {
      Acc acc{};
      for (std::uint64_t t = 0; t < n; ++t) fn(t, acc);
      return acc;
    }
    std::vector<Acc> parts(static_cast<size_t>(w));
    std::vector<std::exception_ptr> errors(static_cast<size_t>(w));
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(w));
    for (int i = 0; i < w; ++i) {
      std::uint64_t begin = n * i / w;
      std::uint64_t end = n * (i + 1) / w;
      threads.emplace_back([&, i, begin, end] {
        try {
          for (std::uint64_t t = begin; t < end; ++t) fn(t, parts[static_cast<size_t>(i)]);
        } catch (...) {
          errors[static_cast<size_t>(i)] = std::current_exception();
        }
      });
    }
    for (auto& th : threads) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    Acc acc{};
    for (int i = 0; i < w; ++i) merge(acc, parts[static_cast<size_t>(i)]);
    return acc;
  }

  /// Count trials satisfying a predicate.
  template <class Fn>
  std::uint64_t count(std::uint64_t n, Fn&& fn) const {
    return run<std::uint64_t>(
        n, [&](std::uint64_t t, std::uint64_t& acc) { acc += fn(t) ? 1 : 0; },
        [](std::uint64_t& a, const std::uint64_t& b) { a += b; });
  }

 private:
  int workers_ = 1;
};

}  // namespace percolab
