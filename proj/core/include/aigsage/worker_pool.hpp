// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace aigsage {

/// Persistent pool of worker threads with dynamic item claiming. The calling
/// thread participates, so a pool of size N uses N threads during for_each.
/// Work items must write disjoint state; results are then independent of the
/// schedule.
class WorkerPool {
 public:
  /// workers == 0 picks the default (AIGSAGE_WORKERS env var, else hardware
  /// concurrency).
  explicit WorkerPool(unsigned workers = 0);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  unsigned workers() const { return workers_; }

  /// Runs fn(i) for every i in [0, count) and blocks until done. A call
  /// made while the pool is already dispatching (nested or concurrent)
  /// runs inline on the calling thread; results are identical either way.
  void for_each(std::size_t count, const std::function<void(std::size_t)>& fn);

  static unsigned default_workers();

 private:
  void worker_loop();
  void run_items(const std::function<void(std::size_t)>& fn, std::size_t count);

  unsigned workers_ = 1;
  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable cv_work_;
  std::condition_variable cv_done_;
  const std::function<void(std::size_t)>* fn_ = nullptr;
  std::size_t count_ = 0;
  std::atomic<std::size_t> next_{0};
  std::size_t active_ = 0;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
  std::atomic<bool> busy_{false};
};

/// Process-wide pool sized by WorkerPool::default_workers().
WorkerPool& default_pool();

}  // namespace aigsage
