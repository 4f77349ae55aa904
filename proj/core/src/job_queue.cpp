#include "scenvar/job_queue.hpp"

#include <stdexcept>

namespace scenvar {

JobQueue::JobQueue(unsigned workers, std::size_t capacity) : capacity_(capacity) {
  if (workers == 0) throw std::invalid_argument("job queue needs at least one worker");
  workers_.reserve(workers);
  for (unsigned i = 0; i < workers; ++i)
    workers_.emplace_back([this](std::stop_token stop) { work(stop); });
}

JobQueue::~JobQueue() { shutdown(); }

bool JobQueue::submit(std::function<void()> task) {
  {
    std::scoped_lock lock(mutex_);
    if (closed_ || tasks_.size() >= capacity_) return false;
    tasks_.push_back(std::move(task));
  }
  ready_.notify_one();
  return true;
}

std::vector<std::function<void()>> JobQueue::shutdown() {
  std::vector<std::function<void()>> left;
  {
    std::scoped_lock lock(mutex_);
    closed_ = true;
    left.assign(std::make_move_iterator(tasks_.begin()), std::make_move_iterator(tasks_.end()));
    tasks_.clear();
  }
  for (auto& w : workers_) w.request_stop();
  ready_.notify_all();
  workers_.clear();
  return left;
}

std::size_t JobQueue::pending() const {
  std::scoped_lock lock(mutex_);
  return tasks_.size();
}

void JobQueue::work(std::stop_token stop) {
  for (;;) {
    std::function<void()> task;
    {
      std::unique_lock lock(mutex_);
      if (!ready_.wait(lock, stop, [this] { return !tasks_.empty(); })) return;
      task = std::move(tasks_.front());
      tasks_.pop_front();
    }
    try {
      task();
    } catch (...) {
      // tasks report their own failures
    }
  }
}

}  // namespace scenvar
