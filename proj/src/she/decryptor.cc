#include "teefhe/she/decryptor.h"

#include "teefhe/errors.h"
#include "teefhe/ring/constant_time.h"
#include "teefhe/she/keys.h"

namespace teefhe::she {

void CheckCiphertext(const Context& ctx, const Ciphertext& ct) {
  if (ct.params_id != ctx.params_id()) {
    throw ParameterError("ciphertext was produced under different params");
  }
  if (ct.size() < 2 || ct.size() > 3) {
    throw ParameterError("ciphertext must have 2 or 3 parts");
  }
  for (const Poly& part : ct.parts) {
    if (part.n() != ctx.n() || part.modulus() != ctx.q()) {
      throw ParameterError("ciphertext part does not match n or q");
    }
  }
}

Decryptor::Decryptor(ContextPtr ctx, SecretKey sk)
    : ctx_(std::move(ctx)), sk_(std::move(sk)) {
  CheckKey(*ctx_, sk_);
}

Poly Decryptor::Phase(const Ciphertext& ct) const {
  CheckCiphertext(*ctx_, ct);
  Poly phase = PolyAddMod(ct.parts[0], ctx_->Multiply(ct.parts[1], sk_.s));
  if (ct.size() == 3) {
    const Poly s2 = ctx_->Multiply(sk_.s, sk_.s);
    phase = PolyAddMod(phase, ctx_->Multiply(ct.parts[2], s2));
  }
  return phase;
}

Poly Decryptor::PhaseTraced(const Ciphertext& ct) const {
  const Modulus& q = ctx_->q();
  Poly phase = ctx_->MultiplyTraced(ct.parts[1], sk_.s);
  if (ct.size() == 3) {
    const Poly s2 = ctx_->MultiplyTraced(sk_.s, sk_.s);
    const Poly term = ctx_->MultiplyTraced(ct.parts[2], s2);
    auto w = phase.mutable_coeffs();
    for (std::size_t i = 0; i < ctx_->n(); ++i) {
      ct::Store(w, i, ct::AddMod(ct::Load(w, i), term[i], q));
    }
  }
  auto w = phase.mutable_coeffs();
  for (std::size_t i = 0; i < ctx_->n(); ++i) {
    ct::Store(w, i, ct::AddMod(ct::Load(w, i), ct.parts[0][i], q));
  }
  return phase;
}

Plaintext Decryptor::Decrypt(const Ciphertext& ct) const {
  const Poly phase = Phase(ct);
  Poly m(ctx_->n(), ctx_->t());
  for (std::size_t i = 0; i < ctx_->n(); ++i) {
    m[i] = ctx_->ScaleDownRound(phase[i]);
  }
  return Plaintext{std::move(m)};
}

std::vector<uint64_t> Decryptor::DecryptPadded(const Ciphertext& ct) const {
  CheckCiphertext(*ctx_, ct);
  const Poly phase = PhaseTraced(ct);
  const std::size_t n = ctx_->n();
  std::vector<uint64_t> out(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const uint64_t v = ct::Load(phase.coeffs(), i);
    trace::Record(trace::OpKind::kRound, static_cast<int32_t>(i));
    ct::Store(out, i, ctx_->ScaleDownRound(v));
  }
  ct::Store(out, n, 0);
  return out;
}

}  // namespace teefhe::she
