#ifndef TEEFHE_SHE_DECRYPTOR_H_
#define TEEFHE_SHE_DECRYPTOR_H_

#include <cstdint>
#include <vector>

#include "teefhe/she/context.h"
#include "teefhe/she/types.h"

namespace teefhe::she {

class Decryptor {
 public:
  Decryptor(ContextPtr ctx, SecretKey sk);

  // m[i] = round(t * phase[i] / q) mod t.
  Plaintext Decrypt(const Ciphertext& ct) const;

  // Enclave-side variant returning n+1 slots, the last always zero. Uses
  // only traced, branch-free word operations.
  std::vector<uint64_t> DecryptPadded(const Ciphertext& ct) const;

  // sum_k ct_k * s^k mod q.
  Poly Phase(const Ciphertext& ct) const;

  const Context& context() const { return *ctx_; }

 private:
  Poly PhaseTraced(const Ciphertext& ct) const;

  ContextPtr ctx_;
  SecretKey sk_;
};

// ParameterError unless ct has 2 or 3 parts shaped for ctx and the
// matching params_id.
void CheckCiphertext(const Context& ctx, const Ciphertext& ct);

}  // namespace teefhe::she

#endif  // TEEFHE_SHE_DECRYPTOR_H_
