// SPDX-License-Identifier: Apache-2.0
#include "aigsage/worker_pool.hpp"

#include <cstdlib>
#include <string>

namespace aigsage {

unsigned WorkerPool::default_workers() {
  if (const char* env = std::getenv("AIGSAGE_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw >= 1 ? hw : 1;
}

WorkerPool::WorkerPool(unsigned workers) {
  workers_ = workers == 0 ? default_workers() : workers;
  threads_.reserve(workers_ - 1);
  for (unsigned i = 0; i + 1 < workers_; ++i) threads_.emplace_back([this] { worker_loop(); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    stop_ = true;
  }
  cv_work_.notify_all();
  for (std::thread& t : threads_) t.join();
}

void WorkerPool::run_items(const std::function<void(std::size_t)>& fn, std::size_t count) {
  for (std::size_t i = next_.fetch_add(1, std::memory_order_relaxed); i < count;
       i = next_.fetch_add(1, std::memory_order_relaxed))
    fn(i);
}

void WorkerPool::worker_loop() {
  std::uint64_t seen = 0;
  std::unique_lock<std::mutex> lock(mutex_);
  for (;;) {
    cv_work_.wait(lock, [&] { return stop_ || generation_ != seen; });
    if (stop_) return;
    seen = generation_;
    const auto* fn = fn_;
    const std::size_t count = count_;
    lock.unlock();
    run_items(*fn, count);
    lock.lock();
    if (--active_ == 0) cv_done_.notify_all();
  }
}

void WorkerPool::for_each(std::size_t count, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (threads_.empty() || count <= 2 || busy_.exchange(true, std::memory_order_acquire)) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  {
    std::lock_guard<std::mutex> lock(mutex_);
    fn_ = &fn;
    count_ = count;
    next_.store(0, std::memory_order_relaxed);
    active_ = threads_.size();
    ++generation_;
  }
  cv_work_.notify_all();
  run_items(fn, count);
  {
    std::unique_lock<std::mutex> lock(mutex_);
    cv_done_.wait(lock, [&] { return active_ == 0; });
  }
  busy_.store(false, std::memory_order_release);
}

WorkerPool& default_pool() {
  static WorkerPool pool(WorkerPool::default_workers());
  return pool;
}

}  // namespace aigsage
