#include "teefhe/ring/ntt.h"

#include <algorithm>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "teefhe/errors.h"
#include "teefhe/ring/constant_time.h"
#include "teefhe/ring/poly.h"
#include "teefhe/ring/trace.h"

namespace teefhe {

namespace {

uint64_t PowModPublic(uint64_t base, uint64_t exponent, const Modulus& q) {
  uint64_t result = 1;
  while (exponent != 0) {
    if (exponent & 1) result = q.Mul(result, base);
    base = q.Mul(base, base);
    exponent >>= 1;
  }
  return result;
}

std::size_t ReverseBits(std::size_t value, int bits) {
  std::size_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | (value & 1);
    value >>= 1;
  }
  return r;
}

uint64_t SmallestPrimitive2nRoot(std::size_t n, const Modulus& q) {
  const uint64_t order = 2 * static_cast<uint64_t>(n);
  const uint64_t cofactor = (q.value() - 1) / order;
  uint64_t psi = 0;
  for (uint64_t x = 2; x < q.value(); ++x) {
    const uint64_t candidate = PowModPublic(x, cofactor, q);
    if (PowModPublic(candidate, n, q) == q.value() - 1) {
      psi = candidate;
      break;
    }
  }
  if (psi == 0) throw ConfigurationError("no primitive 2n-th root found");
  // The primitive 2n-th roots are exactly the odd powers of psi.
  const uint64_t psi_sq = q.Mul(psi, psi);
  uint64_t best = psi;
  uint64_t current = psi;
  for (uint64_t k = 1; k < n; ++k) {
    current = q.Mul(current, psi_sq);
    best = std::min(best, current);
  }
  return best;
}

}  // namespace

uint64_t ShoupPrecompute(uint64_t w, uint64_t q) {
  return static_cast<uint64_t>((uint128_t{w} << 64) / q);
}

bool NttTables::Supports(std::size_t n, uint64_t q) {
  if (!IsPowerOfTwo(n) || n < 2) return false;
  return (q - 1) % (2 * static_cast<uint64_t>(n)) == 0 && IsPrime(q);
}

NttTables::NttTables(std::size_t n, const Modulus& modulus)
    : n_(n), log_n_(0), modulus_(modulus) {
  if (!Supports(n, modulus.value())) {
    throw ConfigurationError("modulus " + std::to_string(modulus.value()) +
                             " is not NTT-friendly for n = " +
                             std::to_string(n));
  }
  while ((std::size_t{1} << log_n_) < n_) ++log_n_;
  root_ = SmallestPrimitive2nRoot(n_, modulus_);
  const uint64_t q = modulus_.value();
  const uint64_t inv_root = InverseMod(root_, q);

  root_powers_.resize(n_);
  inv_root_powers_.resize(n_);
  uint64_t power = 1;
  uint64_t inv_power = 1;
  std::vector<uint64_t> powers(n_), inv_powers(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    powers[i] = power;
    inv_powers[i] = inv_power;
    power = modulus_.Mul(power, root_);
    inv_power = modulus_.Mul(inv_power, inv_root);
  }
  root_powers_shoup_.resize(n_);
  inv_root_powers_shoup_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t r = ReverseBits(i, log_n_);
    root_powers_[i] = powers[r];
    inv_root_powers_[i] = inv_powers[r];
    root_powers_shoup_[i] = ShoupPrecompute(root_powers_[i], q);
    inv_root_powers_shoup_[i] = ShoupPrecompute(inv_root_powers_[i], q);
  }
  inv_n_ = InverseMod(n_ % q, q);
  inv_n_shoup_ = ShoupPrecompute(inv_n_, q);
}

std::shared_ptr<const NttTables> NttTables::Get(std::size_t n,
                                                const Modulus& modulus) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, uint64_t>,
                  std::shared_ptr<const NttTables>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, modulus.value()}];
  if (!slot) slot = std::make_shared<const NttTables>(n, modulus);
  return slot;
}

template <bool kTraced>
void NttTables::ForwardImpl(std::span<uint64_t> a) const {
  const uint64_t q = modulus_.value();
  std::size_t t = n_;
  for (std::size_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j1 = 2 * i * t;
      const uint64_t w = root_powers_[m + i];
      const uint64_t w_shoup = root_powers_shoup_[m + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        if constexpr (kTraced) {
          trace::Record(trace::OpKind::kLoad, static_cast<int32_t>(j));
          trace::Record(trace::OpKind::kLoad, static_cast<int32_t>(j + t));
          trace::Record(trace::OpKind::kMulMod);
          trace::Record(trace::OpKind::kAddMod);
          trace::Record(trace::OpKind::kSubMod);
          trace::Record(trace::OpKind::kStore, static_cast<int32_t>(j));
          trace::Record(trace::OpKind::kStore, static_cast<int32_t>(j + t));
        }
        const uint64_t u = a[j];
        const uint64_t v = MulShoup(a[j + t], w, w_shoup, q);
        a[j] = modulus_.Add(u, v);
        a[j + t] = modulus_.Sub(u, v);
      }
    }
  }
}

template <bool kTraced>
void NttTables::InverseImpl(std::span<uint64_t> a) const {
  const uint64_t q = modulus_.value();
  std::size_t t = 1;
  for (std::size_t m = n_; m > 1; m >>= 1) {
    std::size_t j1 = 0;
    const std::size_t h = m >> 1;
    for (std::size_t i = 0; i < h; ++i) {
      const uint64_t w = inv_root_powers_[h + i];
      const uint64_t w_shoup = inv_root_powers_shoup_[h + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        if constexpr (kTraced) {
          trace::Record(trace::OpKind::kLoad, static_cast<int32_t>(j));
          trace::Record(trace::OpKind::kLoad, static_cast<int32_t>(j + t));
          trace::Record(trace::OpKind::kAddMod);
          trace::Record(trace::OpKind::kSubMod);
          trace::Record(trace::OpKind::kMulMod);
          trace::Record(trace::OpKind::kStore, static_cast<int32_t>(j));
          trace::Record(trace::OpKind::kStore, static_cast<int32_t>(j + t));
        }
        const uint64_t u = a[j];
        const uint64_t v = a[j + t];
        a[j] = modulus_.Add(u, v);
        a[j + t] = MulShoup(modulus_.Sub(u, v), w, w_shoup, q);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (std::size_t j = 0; j < n_; ++j) {
    if constexpr (kTraced) {
      trace::Record(trace::OpKind::kLoad, static_cast<int32_t>(j));
      trace::Record(trace::OpKind::kMulMod);
      trace::Record(trace::OpKind::kStore, static_cast<int32_t>(j));
    }
    a[j] = MulShoup(a[j], inv_n_, inv_n_shoup_, q);
  }
}

void NttTables::Forward(std::span<uint64_t> values) const {
  ForwardImpl<false>(values);
}
void NttTables::Inverse(std::span<uint64_t> values) const {
  InverseImpl<false>(values);
}
// Without an active capture the events would be dropped anyway, so the
// untraced instantiation does the same arithmetic faster.
void NttTables::ForwardTraced(std::span<uint64_t> values) const {
  if (trace::Active()) {
    ForwardImpl<true>(values);
  } else {
    ForwardImpl<false>(values);
  }
}
void NttTables::InverseTraced(std::span<uint64_t> values) const {
  if (trace::Active()) {
    InverseImpl<true>(values);
  } else {
    InverseImpl<false>(values);
  }
}

}  // namespace teefhe
