#ifndef TEEFHE_SHE_NOISE_H_
#define TEEFHE_SHE_NOISE_H_

#include <cstdint>

#include "teefhe/she/decryptor.h"
#include "teefhe/she/params.h"
#include "teefhe/she/types.h"

namespace teefhe::she {

// ||centered(phase - delta * decrypt(ct))||_inf. Needs the secret key.
uint64_t NoiseInfinityNorm(const Decryptor& decryptor, const Ciphertext& ct);

// Same norm measured against a known message instead of the decryption.
// Once noise wraps past q/(2t) the decryption is wrong and the residual
// against it looks small again; measuring against the tracked message keeps
// the budget at zero in that case.
uint64_t NoiseInfinityNorm(const Decryptor& decryptor, const Ciphertext& ct,
                           const Plaintext& expected);

// max(0, floor(log2 q - log2(2 t max(norm, 1)))), computed exactly.
int BudgetFromNoiseNorm(const EncryptionParams& params, uint64_t norm);

int NoiseBudgetExact(const Decryptor& decryptor, const Ciphertext& ct);
int NoiseBudgetExact(const Decryptor& decryptor, const Ciphertext& ct,
                     const Plaintext& expected);

// Budget guaranteed for any fresh encryption: noise is at most B(2n+1).
int FreshBudgetLowerBound(const EncryptionParams& params);

}  // namespace teefhe::she

#endif  // TEEFHE_SHE_NOISE_H_
