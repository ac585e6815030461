#include "teefhe/she/context.h"

#include <atomic>
#include <cstring>

#include <boost/multiprecision/cpp_int.hpp>
#include <sodium.h>

#include "teefhe/errors.h"
#include "teefhe/ring/constant_time.h"
#include "teefhe/she/serialization.h"

namespace teefhe::she {

namespace {

std::atomic<uint64_t> g_build_count{0};

constexpr int kAuxPrimeBits = 61;
constexpr std::size_t kAuxPrimeCount = 3;

// Primes below 2^bits congruent to 1 mod `step`, largest first, skipping
// `exclude`.
std::vector<Modulus> AuxPrimes(uint64_t step, uint64_t exclude) {
  std::vector<Modulus> out;
  uint64_t candidate = ((uint64_t{1} << kAuxPrimeBits) - 1) / step * step + 1;
  if (candidate >= (uint64_t{1} << kAuxPrimeBits)) candidate -= step;
  while (out.size() < kAuxPrimeCount) {
    if (candidate != exclude && IsPrime(candidate)) out.emplace_back(candidate);
    candidate -= step;
  }
  return out;
}

// Inverse of an odd word modulo 2^64 by Newton iteration.
uint64_t InverseWord(uint64_t odd) {
  uint64_t x = odd;  // correct to 3 bits
  for (int i = 0; i < 5; ++i) x *= 2 - odd * x;
  return x;
}

uint64_t ParamsDigest(const EncryptionParams& params) {
  const std::vector<uint8_t> bytes = SerializeParams(params);
  uint8_t digest[crypto_generichash_BYTES_MIN];
  crypto_generichash(digest, sizeof digest, bytes.data(), bytes.size(),
                     nullptr, 0);
  uint64_t id;
  std::memcpy(&id, digest, sizeof id);
  return id;
}

}  // namespace

std::shared_ptr<const Context> Context::Create(const EncryptionParams& params) {
  params.Validate();
  return std::shared_ptr<const Context>(new Context(params));
}

uint64_t Context::BuildCount() { return g_build_count.load(); }

Context::Context(const EncryptionParams& params)
    : params_(params),
      q_(params.q),
      t_(params.t),
      delta_(params.q / params.t),
      params_id_(ParamsDigest(params)),
      q_inv_word_(InverseWord(params.q)),
      half_q_(params.q / 2),
      ntt_(NttTables::Get(params.n, q_)),
      aux_(AuxPrimes(2 * params.n, params.q)) {
  for (const Modulus& p : aux_) aux_ntt_.push_back(NttTables::Get(params.n, p));
  g_build_count.fetch_add(1);
}

Poly Context::Multiply(const Poly& a, const Poly& b) const {
  if (a.n() != n() || b.n() != n() || a.modulus() != q_ ||
      b.modulus() != q_) {
    throw ParameterError("operand does not match context");
  }
  std::vector<uint64_t> fa(a.coeffs().begin(), a.coeffs().end());
  std::vector<uint64_t> fb(b.coeffs().begin(), b.coeffs().end());
  ntt_->Forward(fa);
  ntt_->Forward(fb);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] = q_.Mul(fa[i], fb[i]);
  ntt_->Inverse(fa);
  return Poly::FromCoefficients(std::move(fa), q_);
}

Poly Context::MultiplyTraced(const Poly& a, const Poly& b) const {
  if (a.n() != n() || b.n() != n() || a.modulus() != q_ ||
      b.modulus() != q_) {
    throw ParameterError("operand does not match context");
  }
  std::vector<uint64_t> fa(a.coeffs().begin(), a.coeffs().end());
  std::vector<uint64_t> fb(b.coeffs().begin(), b.coeffs().end());
  ntt_->ForwardTraced(fa);
  ntt_->ForwardTraced(fb);
  for (std::size_t i = 0; i < fa.size(); ++i) {
    const uint64_t x = ct::Load(fa, i);
    const uint64_t y = ct::Load(fb, i);
    ct::Store(fa, i, ct::MulMod(x, y, q_));
  }
  ntt_->InverseTraced(fa);
  return Poly::FromCoefficients(std::move(fa), q_);
}

uint64_t Context::ScaleDownRound(uint64_t v) const {
  // x = t*v + floor(q/2); quotient = floor(x / q) < t fits in a word, and
  // x - (x mod q) is divisible by q, so the division is a multiplication by
  // q^-1 mod 2^64.
  const uint128_t x = uint128_t{t_.value()} * v + half_q_;
  const uint64_t r = q_.Reduce(x);
  const uint64_t quotient = (static_cast<uint64_t>(x) - r) * q_inv_word_;
  return t_.Reduce(quotient);
}

std::array<Poly, 3> Context::TensorScaled(const Poly& a0, const Poly& a1,
                                          const Poly& b0,
                                          const Poly& b1) const {
  using boost::multiprecision::int256_t;
  const std::size_t len = n();
  const Poly* inputs[4] = {&a0, &a1, &b0, &b1};
  for (const Poly* p : inputs) {
    if (p->n() != len || p->modulus() != q_) {
      throw ParameterError("operand does not match context");
    }
  }

  // products[k][j]: the j-th tensor entry modulo aux prime k.
  std::vector<std::array<std::vector<uint64_t>, 3>> products(aux_.size());
  for (std::size_t k = 0; k < aux_.size(); ++k) {
    const Modulus& p = aux_[k];
    std::array<std::vector<uint64_t>, 4> lifted;
    for (int i = 0; i < 4; ++i) {
      lifted[i].resize(len);
      for (std::size_t j = 0; j < len; ++j) {
        const uint64_t c = (*inputs[i])[j];
        // Centered lift of c into Z_p.
        lifted[i][j] = c > half_q_ ? p.value() - (q_.value() - c) : c;
      }
      aux_ntt_[k]->Forward(lifted[i]);
    }
    auto& out = products[k];
    for (auto& v : out) v.resize(len);
    for (std::size_t j = 0; j < len; ++j) {
      out[0][j] = p.Mul(lifted[0][j], lifted[2][j]);
      out[1][j] = p.Add(p.Mul(lifted[0][j], lifted[3][j]),
                        p.Mul(lifted[1][j], lifted[2][j]));
      out[2][j] = p.Mul(lifted[1][j], lifted[3][j]);
    }
    for (auto& v : out) aux_ntt_[k]->Inverse(v);
  }

  // Garner reconstruction to the centered integer, then scale by t/q.
  const Modulus& p1 = aux_[0];
  const Modulus& p2 = aux_[1];
  const Modulus& p3 = aux_[2];
  const uint64_t p1_inv_mod_p2 = InverseMod(p1.value() % p2.value(), p2.value());
  const uint64_t p1p2_mod_p3 = p3.Mul(p3.Reduce(p1.value()), p3.Reduce(p2.value()));
  const uint64_t p1p2_inv_mod_p3 = InverseMod(p1p2_mod_p3, p3.value());
  const int256_t p1_big = p1.value();
  const int256_t p1p2_big = p1_big * p2.value();
  const int256_t product_big = p1p2_big * p3.value();
  const int256_t half_product = product_big / 2;
  const int256_t q_big = q_.value();
  const int256_t t_big = t_.value();

  std::array<Poly, 3> result = {Poly(len, q_), Poly(len, q_), Poly(len, q_)};
  for (int e = 0; e < 3; ++e) {
    for (std::size_t j = 0; j < len; ++j) {
      const uint64_t r1 = products[0][e][j];
      const uint64_t r2 = products[1][e][j];
      const uint64_t r3 = products[2][e][j];
      const uint64_t k2 =
          p2.Mul(p2.Sub(r2, p2.Reduce(r1)), p1_inv_mod_p2);
      const uint64_t partial =
          p3.Add(p3.Reduce(r1), p3.Mul(p3.Reduce(p1.value()), p3.Reduce(k2)));
      const uint64_t k3 = p3.Mul(p3.Sub(r3, partial), p1p2_inv_mod_p3);
      int256_t x = int256_t(r1) + p1_big * k2 + p1p2_big * k3;
      if (x > half_product) x -= product_big;
      // floor((t*x + floor(q/2)) / q), then reduce mod q.
      int256_t num = t_big * x + int256_t(half_q_);
      int256_t quotient = num / q_big;
      if (num < 0 && quotient * q_big != num) quotient -= 1;
      int256_t rem = quotient % q_big;
      if (rem < 0) rem += q_big;
      result[e][j] = static_cast<uint64_t>(rem);
    }
  }
  return result;
}

}  // namespace teefhe::she
