#include "teefhe/client/runtime.h"

#include <algorithm>

#include "teefhe/errors.h"
#include "teefhe/she/noise.h"

namespace teefhe::client {

using she::HomOp;

HomomorphicRuntime::HomomorphicRuntime(she::ContextPtr ctx, she::KeySet keys,
                                       RuntimeOptions options,
                                       BootstrapLink* link)
    : ctx_(ctx),
      keys_(std::move(keys)),
      options_(options),
      link_(link),
      costs_(options.costs.fresh_budget > 0 ? options.costs
                                             : she::CalibrateCosts(ctx)),
      rng_(RandomStream::Seeded(options.seed)),
      encryptor_(ctx, keys_.public_key),
      decryptor_(ctx, keys_.secret),
      evaluator_(ctx) {}

HomomorphicRuntime::Register& HomomorphicRuntime::Get(const std::string& name) {
  auto it = regs_.find(name);
  if (it == regs_.end()) throw ParameterError("undefined register " + name);
  return it->second;
}

const HomomorphicRuntime::Register& HomomorphicRuntime::Get(
    const std::string& name) const {
  auto it = regs_.find(name);
  if (it == regs_.end()) throw ParameterError("undefined register " + name);
  return it->second;
}

std::string HomomorphicRuntime::Temporary() {
  return "%" + std::to_string(temp_counter_++);
}

int HomomorphicRuntime::WorstNextCost() const {
  return costs_.Cost(HomOp::kMultiply) + costs_.Cost(HomOp::kRelinearize);
}

void HomomorphicRuntime::Store(const std::string& dst, she::Ciphertext ct,
                               she::BudgetEstimator est) {
  auto it = regs_.find(dst);
  if (it == regs_.end()) {
    regs_.emplace(dst, Register{std::move(ct), est});
  } else {
    it->second.ct = std::move(ct);
    it->second.est = est;
  }
}

void HomomorphicRuntime::Refresh(const std::string& reg,
                                 const sched::NoiseReport& report,
                                 bool require_admit) {
  ++stats_.reports_sent;
  const sched::Decision d = link_->Report(report);
  if (d == sched::Decision::kDefer) {
    if (require_admit) {
      throw BudgetExhaustedError("server deferred a bootstrap of " + reg +
                                 " that the next operation needs");
    }
    return;
  }
  Register& r = Get(reg);
  if (r.ct.size() == 3) {
    r.ct = evaluator_.Relinearize(r.ct, keys_.eval);
  }
  r.ct = link_->Refresh(r.ct);
  r.est.Reset();
  ++stats_.estimator_resets;
  ++stats_.bootstrap_count;
}

void HomomorphicRuntime::EnsureBudget(
    int cost, std::initializer_list<std::string> sources) {
  while (true) {
    const std::string* weakest = nullptr;
    for (const std::string& s : sources) {
      if (!weakest || Get(s).est.current() < Get(*weakest).est.current()) {
        weakest = &s;
      }
    }
    Register& w = Get(*weakest);
    const int left = w.est.current() - cost;
    if (left > 0) return;
    if (link_ == nullptr) {
      throw BudgetExhaustedError("register " + *weakest + " has " +
                                 std::to_string(w.est.current()) +
                                 " estimated bits, operation needs more than " +
                                 std::to_string(cost));
    }
    if (w.est.current() >= w.est.fresh()) {
      throw BudgetExhaustedError("operation cost " + std::to_string(cost) +
                                 " exceeds the fresh budget");
    }
    Refresh(*weakest,
            {static_cast<uint32_t>(w.est.current()), static_cast<uint32_t>(cost)},
            true);
  }
}

void HomomorphicRuntime::MakeLinear(const std::string& reg) {
  if (Get(reg).ct.size() != 3) return;
  EnsureBudget(costs_.Cost(HomOp::kRelinearize), {reg});
  Register& r = Get(reg);
  r.ct = evaluator_.Relinearize(r.ct, keys_.eval);
  r.est.Apply(HomOp::kRelinearize);
}

void HomomorphicRuntime::AfterOp(const std::string& dst, bool was_multiply) {
  ++stats_.instr_count;
  const std::optional<int> hint = next_cost_hint_;
  next_cost_hint_.reset();
  if (link_ == nullptr) return;
  const Register& r = Get(dst);
  if (was_multiply && options_.force_bootstrap_after_multiply) {
    Refresh(dst, {0, 0}, true);
    return;
  }
  const int next =
      hint.value_or(options_.default_next_cost.value_or(WorstNextCost()));
  Refresh(dst,
          {static_cast<uint32_t>(r.est.current()),
           static_cast<uint32_t>(std::max(next, 0))},
          false);
}

void HomomorphicRuntime::Input(const std::string& dst,
                               const std::vector<uint64_t>& values) {
  if (values.size() > ctx_->n()) {
    throw ParameterError("input has more coefficients than the ring degree");
  }
  she::Ciphertext ct =
      encryptor_.Encrypt(she::Plaintext::FromValues(*ctx_, values), rng_);
  Store(dst, std::move(ct), she::BudgetEstimator(costs_));
  AfterOp(dst, false);
}

void HomomorphicRuntime::Add(const std::string& dst, const std::string& a,
                             const std::string& b) {
  if (Get(a).ct.size() != Get(b).ct.size()) {
    MakeLinear(a);
    MakeLinear(b);
  }
  EnsureBudget(costs_.Cost(HomOp::kAdd), {a, b});
  she::BudgetEstimator est = Get(a).est;
  est.Combine(Get(b).est);
  est.Apply(HomOp::kAdd);
  Store(dst, evaluator_.Add(Get(a).ct, Get(b).ct), est);
  AfterOp(dst, false);
}

void HomomorphicRuntime::Negate(const std::string& dst, const std::string& a) {
  EnsureBudget(costs_.Cost(HomOp::kNegate), {a});
  she::BudgetEstimator est = Get(a).est;
  est.Apply(HomOp::kNegate);
  Store(dst, evaluator_.Negate(Get(a).ct), est);
  AfterOp(dst, false);
}

void HomomorphicRuntime::AddPlain(const std::string& dst, const std::string& a,
                                  uint64_t c) {
  EnsureBudget(costs_.Cost(HomOp::kAddPlain), {a});
  she::BudgetEstimator est = Get(a).est;
  est.Apply(HomOp::kAddPlain);
  Store(dst,
        evaluator_.AddPlain(Get(a).ct,
                            she::Plaintext::Constant(*ctx_, c % ctx_->t().value())),
        est);
  AfterOp(dst, false);
}

void HomomorphicRuntime::MultiplyPlain(const std::string& dst,
                                       const std::string& a, uint64_t c) {
  c %= ctx_->t().value();
  if (c == 0) {
    // The product is an encryption of zero; a fresh one carries no noise
    // from the operand.
    Store(dst, encryptor_.Encrypt(she::Plaintext::Constant(*ctx_, 0), rng_),
          she::BudgetEstimator(costs_));
    AfterOp(dst, false);
    return;
  }
  EnsureBudget(costs_.Cost(HomOp::kMultiplyPlain), {a});
  she::BudgetEstimator est = Get(a).est;
  est.Apply(HomOp::kMultiplyPlain);
  Store(dst,
        evaluator_.MultiplyPlain(Get(a).ct, she::Plaintext::Constant(*ctx_, c)),
        est);
  AfterOp(dst, false);
}

void HomomorphicRuntime::Multiply(const std::string& dst, const std::string& a,
                                  const std::string& b) {
  MakeLinear(a);
  MakeLinear(b);
  // Reserve room for the relinearization that has to follow.
  int cost = costs_.Cost(HomOp::kMultiply);
  if (!keys_.eval.digits.empty()) cost += costs_.Cost(HomOp::kRelinearize);
  EnsureBudget(cost, {a, b});
  she::BudgetEstimator est = Get(a).est;
  est.Combine(Get(b).est);
  est.Apply(HomOp::kMultiply);
  Store(dst, evaluator_.Multiply(Get(a).ct, Get(b).ct), est);
  ++stats_.mul_count;
  AfterOp(dst, true);
}

void HomomorphicRuntime::Relinearize(const std::string& reg) {
  MakeLinear(reg);
  AfterOp(reg, false);
}

std::vector<uint64_t> HomomorphicRuntime::Output(const std::string& reg) const {
  const she::Plaintext pt = decryptor_.Decrypt(Get(reg).ct);
  const auto c = pt.m.coeffs();
  return std::vector<uint64_t>(c.begin(), c.end());
}

void HomomorphicRuntime::Free(const std::string& reg) { regs_.erase(reg); }

int HomomorphicRuntime::EstimatedBudget(const std::string& reg) const {
  return Get(reg).est.current();
}

int HomomorphicRuntime::ExactBudget(const std::string& reg) const {
  return she::NoiseBudgetExact(decryptor_, Get(reg).ct);
}

const she::Ciphertext& HomomorphicRuntime::ciphertext(
    const std::string& reg) const {
  return Get(reg).ct;
}

}  // namespace teefhe::client
