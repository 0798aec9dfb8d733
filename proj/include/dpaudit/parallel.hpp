//
// Copyright 2026 The dpaudit Authors
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
//

#ifndef DPAUDIT_PARALLEL_HPP_
#define DPAUDIT_PARALLEL_HPP_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace dpaudit {

// Runs fn(worker, num_workers) on `workers` threads (the calling thread is
// worker 0) and rethrows the first exception. Callers split work by worker
// index and merge per-worker results themselves, so results never depend on
// scheduling.
template <typename Fn>
void RunWorkers(std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(workers, 1);
  if (workers == 1) {
    fn(std::size_t{0}, std::size_t{1});
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          fn(w, workers);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    try {
      fn(std::size_t{0}, workers);
    } catch (...) {
      errors[0] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace dpaudit

#endif  // DPAUDIT_PARALLEL_HPP_
