#ifndef TEEFHE_BENCH_SCHED_EVAL_H_
#define TEEFHE_BENCH_SCHED_EVAL_H_

#include <chrono>
#include <cstdint>
#include <ostream>
#include <vector>

#include "teefhe/sched/scheduler.h"
#include "teefhe/sched/stats.h"

namespace teefhe::bench {

struct SchedEvalOptions {
  std::size_t clients = 8;
  std::size_t pool = 2;
  // Bootstrap requests per client.
  std::size_t iters = 5;
  std::size_t n = 1024;
  uint64_t seed = 1;
  // Added to every enclave call to emulate the transition cost.
  std::chrono::microseconds transition_delay{10'000};
};

struct SchedEvalResult {
  std::vector<sched::TaskRecord> records;
  sched::WaitingStats stats;
  std::size_t peak_connections = 0;
};

// Starts an in-process bootstrapping server and `clients` threads, each with
// its own TCP connection. Once every client is provisioned they all start
// together and each performs `iters` mandatory report + bootstrap rounds
// back to back. Throws on any protocol failure.
SchedEvalResult RunSchedEval(const SchedEvalOptions& options);

struct SweepPoint {
  std::size_t clients = 0;
  std::size_t pool = 0;
  sched::WaitSummary wait;
};

// One RunSchedEval per (clients, pool) pair, clients outermost.
std::vector<SweepPoint> SweepSchedEval(const SchedEvalOptions& base,
                                       const std::vector<std::size_t>& clients,
                                       const std::vector<std::size_t>& pools);

// Header `clients,pool,tasks,mean_wait_ns,p50_wait_ns,p95_wait_ns,max_wait_ns`.
void WriteSweepCsv(std::ostream& out, const std::vector<SweepPoint>& points);

}  // namespace teefhe::bench

#endif  // TEEFHE_BENCH_SCHED_EVAL_H_
