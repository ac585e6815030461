#include "teefhe/she/evaluator.h"

#include "teefhe/errors.h"
#include "teefhe/she/decryptor.h"
#include "teefhe/she/keys.h"

namespace teefhe::she {

Evaluator::Evaluator(ContextPtr ctx) : ctx_(std::move(ctx)) {}

void Evaluator::CheckPlain(const Plaintext& m) const {
  if (m.m.n() != ctx_->n() || m.m.modulus() != ctx_->t()) {
    throw ParameterError("plaintext does not match the context's n or t");
  }
}

Poly Evaluator::LiftCentered(const Plaintext& m) const {
  const uint64_t t = ctx_->t().value();
  const uint64_t q = ctx_->q().value();
  Poly out(ctx_->n(), ctx_->q());
  for (std::size_t i = 0; i < ctx_->n(); ++i) {
    const uint64_t v = m.m[i];
    out[i] = v > t / 2 ? q - (t - v) : v;
  }
  return out;
}

Ciphertext Evaluator::Add(const Ciphertext& a, const Ciphertext& b) const {
  CheckCiphertext(*ctx_, a);
  CheckCiphertext(*ctx_, b);
  if (a.size() != b.size()) {
    throw ParameterError("cannot add ciphertexts of different sizes");
  }
  Ciphertext out{{}, ctx_->params_id()};
  for (std::size_t k = 0; k < a.size(); ++k) {
    out.parts.push_back(PolyAddMod(a.parts[k], b.parts[k]));
  }
  return out;
}

Ciphertext Evaluator::Negate(const Ciphertext& a) const {
  CheckCiphertext(*ctx_, a);
  Ciphertext out{{}, ctx_->params_id()};
  for (const Poly& part : a.parts) out.parts.push_back(PolyNegateMod(part));
  return out;
}

Ciphertext Evaluator::AddPlain(const Ciphertext& a, const Plaintext& m) const {
  CheckCiphertext(*ctx_, a);
  CheckPlain(m);
  Ciphertext out = a;
  const Modulus& q = ctx_->q();
  for (std::size_t i = 0; i < ctx_->n(); ++i) {
    out.parts[0][i] = q.Add(out.parts[0][i], q.Mul(ctx_->delta(), m.m[i]));
  }
  return out;
}

Ciphertext Evaluator::MultiplyPlain(const Ciphertext& a,
                                    const Plaintext& m) const {
  CheckCiphertext(*ctx_, a);
  CheckPlain(m);
  if (m.m.IsZero()) {
    throw ParameterError("multiply_plain by the zero polynomial");
  }
  const Poly lifted = LiftCentered(m);
  Ciphertext out{{}, ctx_->params_id()};
  for (const Poly& part : a.parts) {
    out.parts.push_back(ctx_->Multiply(part, lifted));
  }
  return out;
}

Ciphertext Evaluator::Multiply(const Ciphertext& a,
                               const Ciphertext& b) const {
  CheckCiphertext(*ctx_, a);
  CheckCiphertext(*ctx_, b);
  if (a.size() != 2 || b.size() != 2) {
    throw ParameterError("multiply requires two size-2 ciphertexts");
  }
  auto tensor =
      ctx_->TensorScaled(a.parts[0], a.parts[1], b.parts[0], b.parts[1]);
  return Ciphertext{{std::move(tensor[0]), std::move(tensor[1]),
                     std::move(tensor[2])},
                    ctx_->params_id()};
}

Ciphertext Evaluator::Relinearize(const Ciphertext& a,
                                  const EvalKeys& evk) const {
  CheckCiphertext(*ctx_, a);
  if (evk.digits.empty()) {
    throw ConfigurationError("relinearization needs evaluation keys");
  }
  CheckKey(*ctx_, evk);
  if (a.size() != 3) {
    throw ParameterError("relinearize requires a size-3 ciphertext");
  }
  const unsigned w = ctx_->params().relin_window;
  const uint64_t mask = (uint64_t{1} << w) - 1;
  Poly c0 = a.parts[0];
  Poly c1 = a.parts[1];
  const Poly& c2 = a.parts[2];
  for (std::size_t j = 0; j < evk.digits.size(); ++j) {
    Poly digit(ctx_->n(), ctx_->q());
    for (std::size_t i = 0; i < ctx_->n(); ++i) {
      digit[i] = (c2[i] >> (j * w)) & mask;
    }
    c0 = PolyAddMod(c0, ctx_->Multiply(digit, evk.digits[j][0]));
    c1 = PolyAddMod(c1, ctx_->Multiply(digit, evk.digits[j][1]));
  }
  return Ciphertext{{std::move(c0), std::move(c1)}, ctx_->params_id()};
}

}  // namespace teefhe::she
