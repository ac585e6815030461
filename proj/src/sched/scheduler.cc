#include "teefhe/sched/scheduler.h"

#include <algorithm>
#include <chrono>

#include "teefhe/errors.h"

namespace teefhe::sched {

namespace {

int64_t NowNs() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

Scheduler::Scheduler(const SchedulerConfig& config, WorkFn work)
    : config_(config), work_(std::move(work)) {
  if (config_.pool_size < 1) throw ParameterError("pool size must be >= 1");
  if (config_.poll_interval.count() <= 0) {
    throw ParameterError("poll interval must be positive");
  }
  idle_workers_ = config_.pool_size;
  for (std::size_t i = 0; i < config_.pool_size; ++i) {
    workers_.emplace_back([this] { WorkerLoop(); });
  }
  dispatcher_ = std::thread([this] { DispatchLoop(); });
}

Scheduler::~Scheduler() { Shutdown(); }

void Scheduler::Shutdown() {
  {
    std::lock_guard lock(mutex_);
    if (stopping_ && !dispatcher_.joinable()) return;
    stopping_ = true;
  }
  dispatcher_cv_.notify_all();
  worker_cv_.notify_all();
  if (dispatcher_.joinable()) dispatcher_.join();
  for (auto& w : workers_) {
    if (w.joinable()) w.join();
  }
  std::lock_guard lock(mutex_);
  for (auto& task : queue_) {
    auto it = data_map_.find(task.client);
    if (it != data_map_.end()) {
      it->second.state = PollResult::State::kFailed;
      it->second.error = "scheduler shut down";
    }
  }
  queue_.clear();
}

std::size_t Scheduler::QueueLengthLocked() const {
  std::size_t reserved = 0;
  for (const auto& [id, count] : reservations_) reserved += count;
  return queue_.size() + reserved;
}

void Scheduler::NoteQueueLengthLocked() {
  max_queue_length_ = std::max(max_queue_length_, QueueLengthLocked());
}

Decision Scheduler::Admit(const ClientId& client, const NoiseReport& report) {
  std::lock_guard lock(mutex_);
  const Decision d = EvaluatePolicy(report, QueueLengthLocked(), config_);
  if (d != Decision::kDefer) {
    ++reservations_[client];
    NoteQueueLengthLocked();
  }
  return d;
}

void Scheduler::CancelReservation(const ClientId& client) {
  std::lock_guard lock(mutex_);
  auto it = reservations_.find(client);
  if (it == reservations_.end()) return;
  if (--it->second == 0) reservations_.erase(it);
}

uint64_t Scheduler::Submit(const ClientId& client, Bytes ciphertext) {
  uint64_t seq;
  {
    std::lock_guard lock(mutex_);
    if (stopping_) throw ProtocolError("scheduler is shutting down");
    if (data_map_.count(client) != 0) {
      throw ProtocolError("client already has an outstanding bootstrap task");
    }
    if (auto it = reservations_.find(client); it != reservations_.end()) {
      if (--it->second == 0) reservations_.erase(it);
    }
    seq = next_seq_++;
    data_map_.emplace(client, Entry{seq});
    queue_.push_back(Task{client, seq, std::move(ciphertext), NowNs()});
    NoteQueueLengthLocked();
  }
  dispatcher_cv_.notify_one();
  return seq;
}

PollResult Scheduler::Poll(const ClientId& client) {
  std::lock_guard lock(mutex_);
  auto it = data_map_.find(client);
  if (it == data_map_.end()) {
    throw ProtocolError("no bootstrap task for client");
  }
  PollResult result;
  result.state = it->second.state;
  if (result.state == PollResult::State::kPending) return result;
  result.payload = std::move(it->second.output);
  result.error = std::move(it->second.error);
  data_map_.erase(it);
  return result;
}

std::size_t Scheduler::queue_length() const {
  std::lock_guard lock(mutex_);
  return QueueLengthLocked();
}

std::size_t Scheduler::max_queue_length() const {
  std::lock_guard lock(mutex_);
  return max_queue_length_;
}

std::vector<TaskRecord> Scheduler::CompletedTasks() const {
  std::lock_guard lock(mutex_);
  return completed_;
}

std::vector<uint64_t> Scheduler::DispatchOrder() const {
  std::lock_guard lock(mutex_);
  return dispatch_order_;
}

void Scheduler::DispatchLoop() {
  std::unique_lock lock(mutex_);
  while (!stopping_) {
    if (idle_workers_ == 0 || queue_.empty()) {
      dispatcher_cv_.wait_for(lock, config_.poll_interval);
      continue;
    }
    Task task = std::move(queue_.front());
    queue_.pop_front();
    task.dispatch_ns = NowNs();
    dispatch_order_.push_back(task.seq);
    --idle_workers_;
    ready_.push_back(std::move(task));
    worker_cv_.notify_one();
  }
}

void Scheduler::WorkerLoop() {
  std::unique_lock lock(mutex_);
  while (true) {
    worker_cv_.wait(lock, [this] { return stopping_ || !ready_.empty(); });
    if (ready_.empty()) return;  // stopping with nothing left to run
    Task task = std::move(ready_.front());
    ready_.pop_front();
    lock.unlock();

    Bytes output;
    std::string error;
    bool failed = false;
    try {
      output = work_(task.client, task.input);
    } catch (const std::exception& e) {
      failed = true;
      error = e.what();
    }
    const int64_t finish = NowNs();

    lock.lock();
    auto it = data_map_.find(task.client);
    if (it != data_map_.end() && it->second.seq == task.seq) {
      it->second.state =
          failed ? PollResult::State::kFailed : PollResult::State::kFinished;
      it->second.output = std::move(output);
      it->second.error = std::move(error);
    }
    completed_.push_back(TaskRecord{task.client, task.seq, task.submit_ns,
                                    task.dispatch_ns, finish, failed});
    ++idle_workers_;
    dispatcher_cv_.notify_one();
  }
}

}  // namespace teefhe::sched
