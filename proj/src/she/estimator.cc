#include "teefhe/she/estimator.h"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "teefhe/errors.h"
#include "teefhe/ring/random.h"
#include "teefhe/she/decryptor.h"
#include "teefhe/she/encryptor.h"
#include "teefhe/she/evaluator.h"
#include "teefhe/she/keys.h"
#include "teefhe/she/noise.h"

namespace teefhe::she {

namespace {

constexpr std::array<std::string_view, kHomOpCount> kNames = {
    "add", "negate", "add_plain", "multiply_plain", "multiply", "relinearize"};

// Every coefficient at +-floor(t/2), signs drawn from rng.
Plaintext ExtremePlaintext(const Context& ctx, RandomStream& rng) {
  const uint64_t t = ctx.t().value();
  const uint64_t half = t / 2;
  std::vector<uint64_t> values(ctx.n());
  for (auto& v : values) v = (rng.NextWord() & 1) ? half : t - half;
  return Plaintext::FromValues(ctx, values);
}

CostTable RunCalibration(const ContextPtr& ctx_ptr, int probes, int margin) {
  const Context& ctx = *ctx_ptr;
  auto rng = RandomStream::Seeded(ctx.params_id());
  const KeySet keys = GenerateKeys(ctx, rng);
  const Encryptor enc(ctx_ptr, keys.public_key);
  const Decryptor dec(ctx_ptr, keys.secret);
  const Evaluator eval(ctx_ptr);

  std::array<int, kHomOpCount> worst{};
  auto note = [&](HomOp op, int before, int after) {
    auto& slot = worst[static_cast<std::size_t>(op)];
    slot = std::max(slot, before - after);
  };
  for (int i = 0; i < probes; ++i) {
    const Plaintext m1 = ExtremePlaintext(ctx, rng);
    const Plaintext m2 = ExtremePlaintext(ctx, rng);
    const Ciphertext c1 = enc.Encrypt(m1, rng);
    const Ciphertext c2 = enc.Encrypt(m2, rng);
    const int b1 = NoiseBudgetExact(dec, c1);
    const int b2 = NoiseBudgetExact(dec, c2);
    const int both = std::min(b1, b2);
    note(HomOp::kAdd, both, NoiseBudgetExact(dec, eval.Add(c1, c2)));
    note(HomOp::kNegate, b1, NoiseBudgetExact(dec, eval.Negate(c1)));
    note(HomOp::kAddPlain, b1, NoiseBudgetExact(dec, eval.AddPlain(c1, m2)));
    note(HomOp::kMultiplyPlain, b1,
         NoiseBudgetExact(dec, eval.MultiplyPlain(c1, m2)));
    const Ciphertext product = eval.Multiply(c1, c2);
    const int bp = NoiseBudgetExact(dec, product);
    note(HomOp::kMultiply, both, bp);
    note(HomOp::kRelinearize, bp,
         NoiseBudgetExact(dec, eval.Relinearize(product, keys.eval)));
  }
  CostTable table;
  table.fresh_budget = FreshBudgetLowerBound(ctx.params());
  table.margin = margin;
  for (std::size_t k = 0; k < kHomOpCount; ++k) {
    table.costs[k] = std::max(worst[k], 0) + margin;
  }
  return table;
}

}  // namespace

std::string_view HomOpName(HomOp op) {
  const auto index = static_cast<std::size_t>(op);
  if (index >= kHomOpCount) throw ConfigurationError("unknown op kind");
  return kNames[index];
}

HomOp HomOpFromName(std::string_view name) {
  for (std::size_t k = 0; k < kHomOpCount; ++k) {
    if (kNames[k] == name) return static_cast<HomOp>(k);
  }
  throw ConfigurationError("unknown op kind: " + std::string(name));
}

int CostTable::Cost(HomOp op) const {
  const auto index = static_cast<std::size_t>(op);
  if (index >= kHomOpCount) throw ConfigurationError("unknown op kind");
  return costs[index];
}

CostTable CalibrateCosts(const ContextPtr& ctx, int probes, int margin) {
  if (probes < 1 || margin < 0) {
    throw ParameterError("calibration needs probes >= 1 and margin >= 0");
  }
  static std::mutex mutex;
  static std::map<std::tuple<uint64_t, int, int>, CostTable> cache;
  const auto key = std::make_tuple(ctx->params_id(), probes, margin);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  CostTable table = RunCalibration(ctx, probes, margin);
  std::lock_guard lock(mutex);
  cache.emplace(key, table);
  return table;
}

BudgetEstimator::BudgetEstimator(const CostTable& table)
    : table_(table), current_(table.fresh_budget) {}

void BudgetEstimator::Apply(HomOp op) {
  current_ = std::max(0, current_ - table_.Cost(op));
}

void BudgetEstimator::Combine(const BudgetEstimator& other) {
  current_ = std::min(current_, other.current_);
}

void BudgetEstimator::Reset() { current_ = table_.fresh_budget; }

}  // namespace teefhe::she
