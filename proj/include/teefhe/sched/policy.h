#ifndef TEEFHE_SCHED_POLICY_H_
#define TEEFHE_SCHED_POLICY_H_

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace teefhe::sched {

using ClientId = std::array<uint8_t, 16>;

enum class Decision : uint8_t {
  kDefer = 0,
  kAdmitEager = 1,
  kAdmitMandatory = 2,
};

std::string_view DecisionName(Decision d);

// Client's estimate of its remaining budget and of the cost of the
// operation it wants to run next, both in bits.
struct NoiseReport {
  uint32_t budget = 0;
  uint32_t next_cost = 0;
  bool operator==(const NoiseReport&) const = default;
};

struct SchedulerConfig {
  std::size_t pool_size = 1;
  uint32_t eager_threshold = 0;
  uint32_t mandatory_margin = 0;
  std::chrono::nanoseconds poll_interval = std::chrono::milliseconds(1);
};

// Mandatory when the next operation would leave at most `mandatory_margin`
// bits; otherwise eager when the budget is at or below the threshold and
// fewer than 2P tasks are waiting; otherwise defer.
Decision EvaluatePolicy(const NoiseReport& report, std::size_t queue_len,
                        const SchedulerConfig& config);

}  // namespace teefhe::sched

#endif  // TEEFHE_SCHED_POLICY_H_
