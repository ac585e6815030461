#ifndef TEEFHE_SCHED_STATS_H_
#define TEEFHE_SCHED_STATS_H_

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "teefhe/sched/scheduler.h"

namespace teefhe::sched {

struct WaitSummary {
  std::size_t count = 0;
  double mean_ns = 0;
  double p50_ns = 0;
  double p95_ns = 0;
  double max_ns = 0;
};

struct WaitingStats {
  WaitSummary aggregate;
  std::map<ClientId, WaitSummary> per_client;
};

// Waiting time is finish - submit. Failed tasks are excluded.
WaitingStats ComputeWaitingStats(const std::vector<TaskRecord>& records);

// Lowercase hex, 32 characters.
std::string ClientIdHex(const ClientId& id);

// Header `client_id,submit_ns,dispatch_ns,finish_ns,wait_ns`, one row per
// record in the given order.
void WriteTaskCsv(std::ostream& out, const std::vector<TaskRecord>& records);

}  // namespace teefhe::sched

#endif  // TEEFHE_SCHED_STATS_H_
