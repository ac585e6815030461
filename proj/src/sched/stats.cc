#include "teefhe/sched/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace teefhe::sched {

namespace {

// Nearest-rank percentile of sorted values.
double Percentile(const std::vector<double>& sorted, double p) {
  const auto rank = static_cast<std::size_t>(
      std::ceil(p / 100.0 * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

WaitSummary Summarize(std::vector<double> waits) {
  WaitSummary s;
  s.count = waits.size();
  if (waits.empty()) return s;
  std::sort(waits.begin(), waits.end());
  s.mean_ns = std::accumulate(waits.begin(), waits.end(), 0.0) /
              static_cast<double>(waits.size());
  s.p50_ns = Percentile(waits, 50);
  s.p95_ns = Percentile(waits, 95);
  s.max_ns = waits.back();
  return s;
}

}  // namespace

WaitingStats ComputeWaitingStats(const std::vector<TaskRecord>& records) {
  std::vector<double> all;
  std::map<ClientId, std::vector<double>> by_client;
  for (const TaskRecord& r : records) {
    if (r.failed) continue;
    const auto w = static_cast<double>(r.wait_ns());
    all.push_back(w);
    by_client[r.client_id].push_back(w);
  }
  WaitingStats stats;
  stats.aggregate = Summarize(std::move(all));
  for (auto& [id, waits] : by_client) {
    stats.per_client[id] = Summarize(std::move(waits));
  }
  return stats;
}

std::string ClientIdHex(const ClientId& id) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (uint8_t b : id) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

void WriteTaskCsv(std::ostream& out, const std::vector<TaskRecord>& records) {
  out << "client_id,submit_ns,dispatch_ns,finish_ns,wait_ns\n";
  for (const TaskRecord& r : records) {
    out << ClientIdHex(r.client_id) << ',' << r.submit_ns << ','
        << r.dispatch_ns << ',' << r.finish_ns << ',' << r.wait_ns() << '\n';
  }
}

}  // namespace teefhe::sched
