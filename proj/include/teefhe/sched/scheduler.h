#ifndef TEEFHE_SCHED_SCHEDULER_H_
#define TEEFHE_SCHED_SCHEDULER_H_

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "teefhe/sched/policy.h"

namespace teefhe::sched {

using Bytes = std::vector<uint8_t>;

// Runs on a worker thread; throwing marks the task failed.
using WorkFn = std::function<Bytes(const ClientId&, const Bytes&)>;

// Timestamps are steady-clock nanoseconds.
struct TaskRecord {
  ClientId client_id{};
  uint64_t submit_seq = 0;
  int64_t submit_ns = 0;
  int64_t dispatch_ns = 0;
  int64_t finish_ns = 0;
  bool failed = false;

  int64_t wait_ns() const { return finish_ns - submit_ns; }
};

struct PollResult {
  enum class State { kPending, kFinished, kFailed };
  State state = State::kPending;
  Bytes payload;      // refreshed ciphertext when finished
  std::string error;  // reason when failed
};

// Task queue, data map, one dispatcher thread and a fixed pool of workers.
// Tasks are dispatched strictly in submission order.
class Scheduler {
 public:
  // Starts the dispatcher and `config.pool_size` workers immediately.
  Scheduler(const SchedulerConfig& config, WorkFn work);
  ~Scheduler();
  Scheduler(const Scheduler&) = delete;
  Scheduler& operator=(const Scheduler&) = delete;

  // Applies the policy against the current queue length. An admission
  // reserves a queue slot for the client until it submits or cancels, so
  // concurrent admissions cannot overshoot the 2P bound.
  Decision Admit(const ClientId& client, const NoiseReport& report);
  void CancelReservation(const ClientId& client);

  // Returns the task's submit sequence number. ProtocolError when the
  // client already has a task in flight or an unretrieved result.
  uint64_t Submit(const ClientId& client, Bytes ciphertext);

  // Finished and failed results are handed out once and then forgotten.
  // ProtocolError for a client with no task.
  PollResult Poll(const ClientId& client);

  // Waiting tasks plus outstanding reservations.
  std::size_t queue_length() const;
  // Largest queue_length() observed at any admission or submission.
  std::size_t max_queue_length() const;

  std::vector<TaskRecord> CompletedTasks() const;
  // Submit sequence numbers in the order tasks were handed to workers.
  std::vector<uint64_t> DispatchOrder() const;

  const SchedulerConfig& config() const { return config_; }

  // Stops accepting work, lets running tasks finish and joins all threads.
  void Shutdown();

 private:
  struct Task {
    ClientId client;
    uint64_t seq;
    Bytes input;
    int64_t submit_ns;
    int64_t dispatch_ns = 0;
  };
  struct Entry {
    uint64_t seq = 0;
    PollResult::State state = PollResult::State::kPending;
    Bytes output{};
    std::string error{};
  };

  void DispatchLoop();
  void WorkerLoop();
  std::size_t QueueLengthLocked() const;
  void NoteQueueLengthLocked();

  SchedulerConfig config_;
  WorkFn work_;

  mutable std::mutex mutex_;
  std::condition_variable dispatcher_cv_;
  std::condition_variable worker_cv_;
  bool stopping_ = false;
  uint64_t next_seq_ = 0;
  std::deque<Task> queue_;
  std::deque<Task> ready_;
  std::size_t idle_workers_ = 0;
  std::map<ClientId, int> reservations_;
  std::map<ClientId, Entry> data_map_;
  std::vector<TaskRecord> completed_;
  std::vector<uint64_t> dispatch_order_;
  std::size_t max_queue_length_ = 0;

  std::thread dispatcher_;
  std::vector<std::thread> workers_;
};

}  // namespace teefhe::sched

#endif  // TEEFHE_SCHED_SCHEDULER_H_
