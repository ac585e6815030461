#include "teefhe/sched/policy.h"

namespace teefhe::sched {

std::string_view DecisionName(Decision d) {
  switch (d) {
    case Decision::kDefer: return "defer";
    case Decision::kAdmitEager: return "admit_eager";
    case Decision::kAdmitMandatory: return "admit_mandatory";
  }
  return "unknown";
}

Decision EvaluatePolicy(const NoiseReport& report, std::size_t queue_len,
                        const SchedulerConfig& config) {
  const int64_t after = int64_t{report.budget} - int64_t{report.next_cost};
  if (after <= int64_t{config.mandatory_margin}) {
    return Decision::kAdmitMandatory;
  }
  if (report.budget <= config.eager_threshold &&
      queue_len < 2 * config.pool_size) {
    return Decision::kAdmitEager;
  }
  return Decision::kDefer;
}

}  // namespace teefhe::sched
