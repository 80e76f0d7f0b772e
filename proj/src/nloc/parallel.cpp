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

#include "octrl/nloc/parallel.hpp"

#include <cstdlib>
#include <string>

#include "octrl/core/errors.hpp"

namespace octrl {

ParallelExecutor::ParallelExecutor(int workers) : workers_(workers) {
  if (workers_ < 1) throw ConfigurationError("parallel executor: workers must be >= 1");
  threads_.reserve(static_cast<std::size_t>(workers_ - 1));
  for (int id = 1; id < workers_; ++id) threads_.emplace_back([this, id] { worker_loop(id); });
}

ParallelExecutor::~ParallelExecutor() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    stop_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

void ParallelExecutor::run_chunk(int id) {
  const std::size_t n = job_size_;
  const auto w = static_cast<std::size_t>(workers_);
  const auto i = static_cast<std::size_t>(id);
  const std::size_t begin = n * i / w;
  const std::size_t end = n * (i + 1) / w;
  try {
    for (std::size_t k = begin; k < end; ++k) (*job_)(k);
  } catch (...) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!error_) error_ = std::current_exception();
  }
}

void ParallelExecutor::worker_loop(int id) {
  unsigned long seen = 0;
  while (true) {
    {
      std::unique_lock<std::mutex> lock(mutex_);
      start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
    }
    run_chunk(id);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      --pending_;
    }
    done_cv_.notify_one();
  }
}

void ParallelExecutor::for_each(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (workers_ == 1 || n < 2) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  {
    std::lock_guard<std::mutex> lock(mutex_);
    job_ = &fn;
    job_size_ = n;
    error_ = nullptr;
    pending_ = workers_ - 1;
    ++generation_;
  }
  start_cv_.notify_all();
  run_chunk(0);
  std::exception_ptr error;
  {
    std::unique_lock<std::mutex> lock(mutex_);
    done_cv_.wait(lock, [&] { return pending_ == 0; });
    job_ = nullptr;
    error = error_;
    error_ = nullptr;
  }
  if (error) std::rethrow_exception(error);
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("OCTRL_WORKERS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
    throw ConfigurationError(std::string("OCTRL_WORKERS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

}  // namespace octrl
