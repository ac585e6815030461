#ifndef TEEFHE_SHE_EVALUATOR_H_
#define TEEFHE_SHE_EVALUATOR_H_

#include "teefhe/she/context.h"
#include "teefhe/she/types.h"

namespace teefhe::she {

// Homomorphic operations. All are pure; operands must carry ctx's params_id.
class Evaluator {
 public:
  explicit Evaluator(ContextPtr ctx);

  // Sizes must agree (2 with 2 or 3 with 3).
  Ciphertext Add(const Ciphertext& a, const Ciphertext& b) const;
  Ciphertext Negate(const Ciphertext& a) const;
  Ciphertext AddPlain(const Ciphertext& a, const Plaintext& m) const;
  // ParameterError for the zero polynomial.
  Ciphertext MultiplyPlain(const Ciphertext& a, const Plaintext& m) const;
  // Both operands size 2; the result has size 3.
  Ciphertext Multiply(const Ciphertext& a, const Ciphertext& b) const;
  // Size 3 to size 2. ConfigurationError when `evk` is empty.
  Ciphertext Relinearize(const Ciphertext& a, const EvalKeys& evk) const;

  const Context& context() const { return *ctx_; }

 private:
  void CheckPlain(const Plaintext& m) const;
  // Centered lift of a plaintext into Z_q.
  Poly LiftCentered(const Plaintext& m) const;

  ContextPtr ctx_;
};

}  // namespace teefhe::she

#endif  // TEEFHE_SHE_EVALUATOR_H_
