#include "teefhe/she/noise.h"

#include <algorithm>
#include <bit>

#include "teefhe/errors.h"
#include "teefhe/ring/modulus.h"

namespace teefhe::she {

namespace {

uint64_t ResidualNorm(const Decryptor& decryptor, const Ciphertext& ct,
                      const Plaintext* expected) {
  const Context& ctx = decryptor.context();
  const Poly phase = decryptor.Phase(ct);
  const Modulus& q = ctx.q();
  uint64_t norm = 0;
  for (std::size_t i = 0; i < ctx.n(); ++i) {
    const uint64_t m =
        expected ? expected->m[i] : ctx.ScaleDownRound(phase[i]);
    const uint64_t e = q.Sub(phase[i], q.Mul(ctx.delta(), m));
    norm = std::max(norm, std::min(e, q.value() - e));
  }
  return norm;
}

}  // namespace

uint64_t NoiseInfinityNorm(const Decryptor& decryptor, const Ciphertext& ct) {
  return ResidualNorm(decryptor, ct, nullptr);
}

uint64_t NoiseInfinityNorm(const Decryptor& decryptor, const Ciphertext& ct,
                           const Plaintext& expected) {
  if (expected.m.n() != decryptor.context().n() ||
      expected.m.modulus() != decryptor.context().t()) {
    throw ParameterError("expected plaintext does not match the context");
  }
  return ResidualNorm(decryptor, ct, &expected);
}

int BudgetFromNoiseNorm(const EncryptionParams& params, uint64_t norm) {
  // floor(log2(q / d)) equals floor(log2(floor(q / d))) for d >= 1.
  const uint128_t d = uint128_t{2} * params.t * std::max<uint64_t>(norm, 1);
  if (d > params.q) return 0;
  const uint64_t ratio = static_cast<uint64_t>(params.q / d);
  return std::bit_width(ratio) - 1;
}

int NoiseBudgetExact(const Decryptor& decryptor, const Ciphertext& ct) {
  return BudgetFromNoiseNorm(decryptor.context().params(),
                             NoiseInfinityNorm(decryptor, ct));
}

int NoiseBudgetExact(const Decryptor& decryptor, const Ciphertext& ct,
                     const Plaintext& expected) {
  return BudgetFromNoiseNorm(decryptor.context().params(),
                             NoiseInfinityNorm(decryptor, ct, expected));
}

int FreshBudgetLowerBound(const EncryptionParams& params) {
  const uint64_t bound = uint64_t{params.bound} * (2 * params.n + 1);
  return BudgetFromNoiseNorm(params, bound);
}

}  // namespace teefhe::she
