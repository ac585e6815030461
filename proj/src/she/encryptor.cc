#include "teefhe/she/encryptor.h"

#include "teefhe/errors.h"
#include "teefhe/ring/constant_time.h"
#include "teefhe/she/keys.h"

namespace teefhe::she {

Encryptor::Encryptor(ContextPtr ctx, PublicKey pk)
    : ctx_(std::move(ctx)), pk_(std::move(pk)) {
  CheckKey(*ctx_, pk_);
}

Ciphertext Encryptor::Encrypt(const Plaintext& pt, RandomStream& rng) const {
  const Context& ctx = *ctx_;
  if (pt.m.n() != ctx.n() || pt.m.modulus() != ctx.t()) {
    throw ParameterError("plaintext does not match the context's n or t");
  }
  const auto& p = ctx.params();
  const Poly u = SampleTernaryPoly(rng, ctx.n(), ctx.q());
  const Poly e1 = SampleErrorPoly(rng, ctx.n(), ctx.q(), p.stddev, p.bound);
  const Poly e2 = SampleErrorPoly(rng, ctx.n(), ctx.q(), p.stddev, p.bound);
  Poly c0 = PolyAddMod(ctx.Multiply(pk_.pk0, u), e1);
  Poly c1 = PolyAddMod(ctx.Multiply(pk_.pk1, u), e2);
  const Modulus& q = ctx.q();
  for (std::size_t i = 0; i < ctx.n(); ++i) {
    c0[i] = q.Add(c0[i], q.Mul(ctx.delta(), pt.m[i]));
  }
  return Ciphertext{{std::move(c0), std::move(c1)}, ctx.params_id()};
}

Ciphertext Encryptor::EncryptPadded(std::span<const uint64_t> padded,
                                    RandomStream& rng) const {
  const Context& ctx = *ctx_;
  const std::size_t n = ctx.n();
  if (padded.size() != n + 1) {
    throw ParameterError("padded plaintext must hold n+1 slots");
  }
  const auto& p = ctx.params();
  const Modulus& q = ctx.q();
  const Poly u = SampleTernaryPoly(rng, n, q);
  const Poly e1 = SampleErrorPoly(rng, n, q, p.stddev, p.bound);
  const Poly e2 = SampleErrorPoly(rng, n, q, p.stddev, p.bound);
  Poly c0 = ctx.MultiplyTraced(pk_.pk0, u);
  Poly c1 = ctx.MultiplyTraced(pk_.pk1, u);
  auto c0w = c0.mutable_coeffs();
  auto c1w = c1.mutable_coeffs();
  for (std::size_t i = 0; i < n; ++i) {
    ct::Store(c0w, i, ct::AddMod(ct::Load(c0w, i), e1[i], q));
    ct::Store(c1w, i, ct::AddMod(ct::Load(c1w, i), e2[i], q));
  }
  for (std::size_t i = 0; i <= n; ++i) {
    const uint64_t m = ctx.t().Reduce(ct::Load(padded, i));
    const uint64_t scaled = ct::MulMod(ctx.delta(), m, q);
    // The extra slot is read and scaled like the others but never stored.
    if (i < n) ct::Store(c0w, i, ct::AddMod(ct::Load(c0w, i), scaled, q));
  }
  return Ciphertext{{std::move(c0), std::move(c1)}, ctx.params_id()};
}

}  // namespace teefhe::she
