#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace scenvar {

/// Fixed pool of workers draining a bounded FIFO of tasks.
class JobQueue {
 public:
  JobQueue(unsigned workers, std::size_t capacity);
  ~JobQueue();
  JobQueue(const JobQueue&) = delete;
  JobQueue& operator=(const JobQueue&) = delete;

  /// False when the queue is full or shut down.
  bool submit(std::function<void()> task);

  /// Stops accepting work, waits for running tasks and returns the tasks that
  /// never started.
  std::vector<std::function<void()>> shutdown();

  std::size_t pending() const;

 private:
  void work(std::stop_token stop);

  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::condition_variable_any ready_;
  std::deque<std::function<void()>> tasks_;
  bool closed_ = false;
  std::vector<std::jthread> workers_;
};

}  // namespace scenvar
