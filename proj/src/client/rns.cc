#include "teefhe/client/rns.h"

#include <algorithm>
#include <set>

#include "teefhe/errors.h"
#include "teefhe/ring/modulus.h"
#include "teefhe/she/keys.h"
#include "teefhe/she/params.h"

namespace teefhe::client {

namespace {

uint64_t Residue(const BigInt& v, uint64_t t) {
  BigInt r = v % t;
  if (r < 0) r += t;
  return r.convert_to<uint64_t>();
}

uint64_t PowMod(uint64_t base, uint64_t exp, uint64_t m) {
  unsigned __int128 result = 1, b = base % m;
  while (exp) {
    if (exp & 1) result = result * b % m;
    b = b * b % m;
    exp >>= 1;
  }
  return static_cast<uint64_t>(result);
}

}  // namespace

struct RnsBackend::Lane {
  uint64_t t;
  she::ContextPtr ctx;
  std::unique_ptr<RemoteBootstrapLink> link;
  std::unique_ptr<HomomorphicRuntime> rt;
};

RnsBackend::Handle::~Handle() {
  for (std::size_t i = 0; i < regs_.size(); ++i) {
    owner_->lanes_[i]->rt->Free(regs_[i]);
  }
}

std::vector<uint64_t> RnsBackend::ChooseModuli(int bits, uint64_t min_t,
                                               uint64_t max_t) {
  std::vector<uint64_t> out;
  BigInt product = 1;
  const BigInt target = BigInt(1) << bits;
  for (uint64_t t = max_t; t >= min_t && product <= target; --t) {
    if (IsPrime(t)) {
      out.push_back(t);
      product *= t;
    }
  }
  if (product <= target) {
    throw ConfigurationError("not enough primes in range for " +
                             std::to_string(bits) + " bits");
  }
  return out;
}

RnsBackend::RnsBackend(RnsOptions options) : options_(std::move(options)) {
  if (options_.moduli.empty()) throw ParameterError("no RNS moduli given");
  const std::set<uint64_t> distinct(options_.moduli.begin(),
                                    options_.moduli.end());
  if (distinct.size() != options_.moduli.size()) {
    throw ParameterError("RNS moduli must be distinct");
  }
  for (uint64_t t : options_.moduli) {
    if (!IsPrime(t)) throw ParameterError("RNS modulus " + std::to_string(t) + " is not prime");
  }
  // Noise growth rises with t, so the table measured at the largest modulus
  // is conservative for every lane.
  const uint64_t t_max = *distinct.rbegin();
  costs_ = she::CalibrateCosts(
      she::Context::Create(she::PresetForDegree(options_.n, t_max)));

  product_ = 1;
  for (std::size_t i = 0; i < options_.moduli.size(); ++i) {
    auto lane = std::make_unique<Lane>();
    lane->t = options_.moduli[i];
    lane->ctx = she::Context::Create(she::PresetForDegree(options_.n, lane->t));
    auto rng = RandomStream::Seeded(options_.seed * 1000003 + i);
    she::KeySet keys = she::GenerateKeys(*lane->ctx, rng);
    if (options_.host) {
      lane->link = OpenRemoteLink(
          *options_.host, options_.port,
          ClientIdFromLabel(options_.label + "/lane/" + std::to_string(i)),
          lane->ctx, keys, rng);
    }
    RuntimeOptions ro;
    ro.costs = costs_;
    ro.seed = options_.seed * 7919 + i;
    ro.force_bootstrap_after_multiply = options_.force_bootstrap_after_multiply;
    ro.default_next_cost = 0;
    lane->rt = std::make_unique<HomomorphicRuntime>(lane->ctx, std::move(keys),
                                                    ro, lane->link.get());
    product_ *= lane->t;
    lanes_.push_back(std::move(lane));
  }
}

RnsBackend::~RnsBackend() = default;

RnsBackend::Value RnsBackend::Wrap(std::vector<std::string> regs) {
  return std::make_shared<Handle>(this, std::move(regs));
}

RnsBackend::Value RnsBackend::Input(const BigInt& v) {
  std::vector<std::string> regs;
  for (auto& lane : lanes_) {
    regs.push_back(lane->rt->Temporary());
    lane->rt->Input(regs.back(), {Residue(v, lane->t)});
  }
  return Wrap(std::move(regs));
}

RnsBackend::Value RnsBackend::Add(const Value& a, const Value& b) {
  std::vector<std::string> regs;
  for (std::size_t i = 0; i < lanes_.size(); ++i) {
    regs.push_back(lanes_[i]->rt->Temporary());
    lanes_[i]->rt->Add(regs.back(), a->reg(i), b->reg(i));
  }
  return Wrap(std::move(regs));
}

RnsBackend::Value RnsBackend::MulPlain(const Value& a, const BigInt& c) {
  std::vector<std::string> regs;
  for (std::size_t i = 0; i < lanes_.size(); ++i) {
    regs.push_back(lanes_[i]->rt->Temporary());
    lanes_[i]->rt->MultiplyPlain(regs.back(), a->reg(i),
                                 Residue(c, lanes_[i]->t));
  }
  return Wrap(std::move(regs));
}

RnsBackend::Value RnsBackend::AddPlain(const Value& a, const BigInt& c) {
  std::vector<std::string> regs;
  for (std::size_t i = 0; i < lanes_.size(); ++i) {
    regs.push_back(lanes_[i]->rt->Temporary());
    lanes_[i]->rt->AddPlain(regs.back(), a->reg(i), Residue(c, lanes_[i]->t));
  }
  return Wrap(std::move(regs));
}

RnsBackend::Value RnsBackend::Mul(const Value& a, const Value& b) {
  std::vector<std::string> regs;
  for (std::size_t i = 0; i < lanes_.size(); ++i) {
    HomomorphicRuntime& rt = *lanes_[i]->rt;
    regs.push_back(rt.Temporary());
    rt.Multiply(regs.back(), a->reg(i), b->reg(i));
    rt.Relinearize(regs.back());
  }
  return Wrap(std::move(regs));
}

BigInt RnsBackend::Reveal(const Value& v) const {
  BigInt x = 0;
  for (std::size_t i = 0; i < lanes_.size(); ++i) {
    const uint64_t t = lanes_[i]->t;
    const uint64_t r = lanes_[i]->rt->Output(v->reg(i))[0];
    const BigInt m_i = product_ / t;
    const uint64_t inv = PowMod(Residue(m_i, t), t - 2, t);
    x += m_i * static_cast<uint64_t>(static_cast<unsigned __int128>(r) * inv % t);
  }
  x %= product_;
  if (x > product_ / 2) x -= product_;
  return x;
}

RnsStats RnsBackend::stats() const {
  RnsStats s;
  for (const auto& lane : lanes_) {
    const RuntimeStats& r = lane->rt->stats();
    s.ops += r.instr_count;
    s.muls += r.mul_count;
    s.bootstraps += r.bootstrap_count;
    s.estimator_resets += r.estimator_resets;
  }
  return s;
}

}  // namespace teefhe::client
