#ifndef TEEFHE_CLIENT_RUNTIME_H_
#define TEEFHE_CLIENT_RUNTIME_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "teefhe/client/bootstrap_link.h"
#include "teefhe/ring/random.h"
#include "teefhe/she/decryptor.h"
#include "teefhe/she/encryptor.h"
#include "teefhe/she/estimator.h"
#include "teefhe/she/evaluator.h"
#include "teefhe/she/types.h"

namespace teefhe::client {

struct RuntimeOptions {
  // Cost table for the estimators. When fresh_budget is 0 the runtime
  // calibrates one for its context.
  she::CostTable costs;
  // Ship every multiply result regardless of its budget.
  bool force_bootstrap_after_multiply = false;
  // `next_cost` announced when no per-operation hint is set. Unset means a
  // multiply plus relinearization.
  std::optional<int> default_next_cost;
  uint64_t seed = 1;
};

struct RuntimeStats {
  uint64_t instr_count = 0;
  uint64_t mul_count = 0;
  uint64_t bootstrap_count = 0;
  uint64_t estimator_resets = 0;
  uint64_t reports_sent = 0;
};

// Executes homomorphic operations over named ciphertext registers. Each
// register carries its own budget estimator. With a link attached, a
// NOISE_REPORT goes out after every operation and admitted registers are
// refreshed in place. Operations whose estimate would reach zero are never
// executed: the weakest operand is bootstrapped first, or
// BudgetExhaustedError is raised when no link is available.
class HomomorphicRuntime {
 public:
  HomomorphicRuntime(she::ContextPtr ctx, she::KeySet keys,
                     RuntimeOptions options = {},
                     BootstrapLink* link = nullptr);

  // Values are reduced mod t; missing coefficients are zero.
  void Input(const std::string& dst, const std::vector<uint64_t>& values);
  void Add(const std::string& dst, const std::string& a, const std::string& b);
  void Negate(const std::string& dst, const std::string& a);
  // Constants are taken mod t and placed in coefficient 0.
  void AddPlain(const std::string& dst, const std::string& a, uint64_t c);
  void MultiplyPlain(const std::string& dst, const std::string& a, uint64_t c);
  // Leaves a size-3 ciphertext; Relinearize (or any later operation that
  // needs size 2) brings it back.
  void Multiply(const std::string& dst, const std::string& a,
                const std::string& b);
  // No-op on a register that is already size 2.
  void Relinearize(const std::string& reg);

  std::vector<uint64_t> Output(const std::string& reg) const;
  void Free(const std::string& reg);
  bool Has(const std::string& reg) const { return regs_.count(reg) != 0; }
  // Returns a register name not used before.
  std::string Temporary();

  int EstimatedBudget(const std::string& reg) const;
  // Needs the secret key; measured against the decryption.
  int ExactBudget(const std::string& reg) const;
  const she::Ciphertext& ciphertext(const std::string& reg) const;

  // Cost announced as `next_cost` in the report after the next operation.
  // Without a hint the runtime announces a multiply plus relinearization.
  void set_next_cost_hint(std::optional<int> cost) { next_cost_hint_ = cost; }

  const RuntimeStats& stats() const { return stats_; }
  const she::CostTable& costs() const { return costs_; }
  const she::ContextPtr& context() const { return ctx_; }
  bool has_link() const { return link_ != nullptr; }

 private:
  struct Register {
    she::Ciphertext ct;
    she::BudgetEstimator est;
  };

  Register& Get(const std::string& name);
  const Register& Get(const std::string& name) const;
  // Makes sure each listed register can absorb `cost` bits.
  void EnsureBudget(int cost, std::initializer_list<std::string> sources);
  void MakeLinear(const std::string& reg);
  void Refresh(const std::string& reg, const sched::NoiseReport& report,
               bool require_admit);
  void AfterOp(const std::string& dst, bool was_multiply);
  void Store(const std::string& dst, she::Ciphertext ct,
             she::BudgetEstimator est);
  int WorstNextCost() const;

  she::ContextPtr ctx_;
  she::KeySet keys_;
  RuntimeOptions options_;
  BootstrapLink* link_;
  she::CostTable costs_;
  RandomStream rng_;
  she::Encryptor encryptor_;
  she::Decryptor decryptor_;
  she::Evaluator evaluator_;
  std::map<std::string, Register> regs_;
  std::optional<int> next_cost_hint_;
  RuntimeStats stats_;
  uint64_t temp_counter_ = 0;
};

}  // namespace teefhe::client

#endif  // TEEFHE_CLIENT_RUNTIME_H_
