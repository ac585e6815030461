#ifndef TEEFHE_SHE_ESTIMATOR_H_
#define TEEFHE_SHE_ESTIMATOR_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "teefhe/she/context.h"

namespace teefhe::she {

enum class HomOp : uint8_t {
  kAdd = 0,
  kNegate,
  kAddPlain,
  kMultiplyPlain,
  kMultiply,
  kRelinearize,
};
inline constexpr std::size_t kHomOpCount = 6;

std::string_view HomOpName(HomOp op);
// ConfigurationError for unknown names.
HomOp HomOpFromName(std::string_view name);

// Worst-case budget cost (bits) per operation, measured by probing.
struct CostTable {
  int fresh_budget = 0;
  int margin = 0;
  std::array<int, kHomOpCount> costs{};

  // ConfigurationError for an op outside the enum.
  int Cost(HomOp op) const;
};

inline constexpr int kDefaultCalibrationProbes = 50;
inline constexpr int kDefaultCalibrationMargin = 2;

// For each op, runs `probes` trials on fresh ciphertexts of extreme-magnitude
// messages, records the largest exact budget drop and adds `margin`. The
// fresh budget is the analytic lower bound for fresh encryptions. Results
// are cached per (params, probes, margin).
CostTable CalibrateCosts(const ContextPtr& ctx,
                         int probes = kDefaultCalibrationProbes,
                         int margin = kDefaultCalibrationMargin);

// Public, key-free tracker of a ciphertext's remaining budget.
class BudgetEstimator {
 public:
  explicit BudgetEstimator(const CostTable& table);

  int current() const { return current_; }
  int fresh() const { return table_.fresh_budget; }
  int Cost(HomOp op) const { return table_.Cost(op); }
  const CostTable& table() const { return table_; }

  // Subtracts the op's cost, flooring at zero.
  void Apply(HomOp op);
  // For binary ops: the result starts from the weaker operand.
  void Combine(const BudgetEstimator& other);
  void Reset();

 private:
  CostTable table_;
  int current_;
};

}  // namespace teefhe::she

#endif  // TEEFHE_SHE_ESTIMATOR_H_
