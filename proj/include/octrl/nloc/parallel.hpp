// Copyright 2026 The octrl Authors
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
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace octrl {

/// Fixed pool of worker threads executing index ranges with static chunking.
///
/// `for_each(n, fn)` splits [0, n) into `workers()` contiguous chunks and calls fn(i) for each index.
/// The calling thread handles the first chunk. Chunk boundaries depend only on n and the worker
/// count, and callers write results into per-index slots, so outputs do not depend on scheduling.
/// The first exception thrown by any chunk is rethrown on the calling thread.
class ParallelExecutor {
 public:
  explicit ParallelExecutor(int workers = 1);
  ~ParallelExecutor();
  ParallelExecutor(const ParallelExecutor&) = delete;
  ParallelExecutor& operator=(const ParallelExecutor&) = delete;

  int workers() const { return workers_; }

  void for_each(std::size_t n, const std::function<void(std::size_t)>& fn);

 private:
  void worker_loop(int id);
  void run_chunk(int id);

  int workers_;
  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::size_t job_size_ = 0;
  unsigned long generation_ = 0;
  int pending_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

/// Resolves a worker count: `requested` if positive, else $OCTRL_WORKERS, else 1.
int resolve_workers(int requested);

}  // namespace octrl
