#ifndef TEEFHE_SHE_ENCRYPTOR_H_
#define TEEFHE_SHE_ENCRYPTOR_H_

#include <cstdint>
#include <span>

#include "teefhe/ring/random.h"
#include "teefhe/she/context.h"
#include "teefhe/she/types.h"

namespace teefhe::she {

class Encryptor {
 public:
  Encryptor(ContextPtr ctx, PublicKey pk);

  // c0 = pk0*u + e1 + delta*m, c1 = pk1*u + e2.
  Ciphertext Encrypt(const Plaintext& pt, RandomStream& rng) const;

  // Enclave-side variant. `padded` holds n+1 plaintext slots (the last one
  // is always zero) and every step goes through the traced word layer, so
  // the recorded trace depends only on n, q and the RNG draws.
  Ciphertext EncryptPadded(std::span<const uint64_t> padded,
                           RandomStream& rng) const;

  const Context& context() const { return *ctx_; }

 private:
  ContextPtr ctx_;
  PublicKey pk_;
};

}  // namespace teefhe::she

#endif  // TEEFHE_SHE_ENCRYPTOR_H_
