#include "teefhe/she/keys.h"

#include "teefhe/errors.h"

namespace teefhe::she {

namespace {

void CheckPoly(const Context& ctx, const Poly& p, const char* what) {
  if (p.n() != ctx.n() || p.modulus() != ctx.q()) {
    throw ParameterError(std::string(what) +
                         " does not match the context's n or q");
  }
}

}  // namespace

Plaintext Plaintext::FromValues(const Context& ctx,
                                const std::vector<uint64_t>& values) {
  if (values.size() > ctx.n()) {
    throw ParameterError("more plaintext values than ring slots");
  }
  Poly m(ctx.n(), ctx.t());
  for (std::size_t i = 0; i < values.size(); ++i) {
    m[i] = ctx.t().Reduce(values[i]);
  }
  return Plaintext{std::move(m)};
}

Plaintext Plaintext::Constant(const Context& ctx, uint64_t value) {
  return FromValues(ctx, {value});
}

SecretKey GenerateSecretKey(const Context& ctx, RandomStream& rng) {
  return SecretKey{SampleTernaryPoly(rng, ctx.n(), ctx.q())};
}

PublicKey GeneratePublicKey(const Context& ctx, const SecretKey& sk,
                            RandomStream& rng) {
  CheckKey(ctx, sk);
  const auto& p = ctx.params();
  Poly a = SampleUniformPoly(rng, ctx.n(), ctx.q());
  const Poly e = SampleErrorPoly(rng, ctx.n(), ctx.q(), p.stddev, p.bound);
  Poly pk0 = PolyNegateMod(PolyAddMod(ctx.Multiply(a, sk.s), e));
  return PublicKey{std::move(pk0), std::move(a)};
}

EvalKeys GenerateEvalKeys(const Context& ctx, const SecretKey& sk,
                          RandomStream& rng) {
  CheckKey(ctx, sk);
  const auto& p = ctx.params();
  const Poly s2 = ctx.Multiply(sk.s, sk.s);
  EvalKeys evk;
  uint64_t power = 1;  // 2^(j*w) mod q
  const uint64_t radix = ctx.q().Reduce(uint64_t{1} << p.relin_window);
  for (std::size_t j = 0; j < p.relin_digit_count(); ++j) {
    Poly a = SampleUniformPoly(rng, ctx.n(), ctx.q());
    const Poly e = SampleErrorPoly(rng, ctx.n(), ctx.q(), p.stddev, p.bound);
    Poly b = PolyNegateMod(PolyAddMod(ctx.Multiply(a, sk.s), e));
    b = PolyAddMod(b, PolyScalarMulMod(s2, power));
    evk.digits.push_back({std::move(b), std::move(a)});
    power = ctx.q().Mul(power, radix);
  }
  return evk;
}

KeySet GenerateKeys(const Context& ctx, RandomStream& rng) {
  SecretKey sk = GenerateSecretKey(ctx, rng);
  PublicKey pk = GeneratePublicKey(ctx, sk, rng);
  EvalKeys evk = GenerateEvalKeys(ctx, sk, rng);
  return KeySet{std::move(sk), std::move(pk), std::move(evk)};
}

void CheckKey(const Context& ctx, const SecretKey& sk) {
  CheckPoly(ctx, sk.s, "secret key");
}

void CheckKey(const Context& ctx, const PublicKey& pk) {
  CheckPoly(ctx, pk.pk0, "public key");
  CheckPoly(ctx, pk.pk1, "public key");
}

void CheckKey(const Context& ctx, const EvalKeys& evk) {
  if (evk.digits.size() != ctx.params().relin_digit_count()) {
    throw ParameterError("evaluation key digit count does not match params");
  }
  for (const auto& d : evk.digits) {
    CheckPoly(ctx, d[0], "evaluation key");
    CheckPoly(ctx, d[1], "evaluation key");
  }
}

}  // namespace teefhe::she
