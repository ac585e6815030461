#ifndef TEEFHE_SHE_KEYS_H_
#define TEEFHE_SHE_KEYS_H_

#include "teefhe/ring/random.h"
#include "teefhe/she/context.h"
#include "teefhe/she/types.h"

namespace teefhe::she {

SecretKey GenerateSecretKey(const Context& ctx, RandomStream& rng);
PublicKey GeneratePublicKey(const Context& ctx, const SecretKey& sk,
                            RandomStream& rng);
EvalKeys GenerateEvalKeys(const Context& ctx, const SecretKey& sk,
                          RandomStream& rng);

// Secret, public and evaluation keys drawn in that order from `rng`.
KeySet GenerateKeys(const Context& ctx, RandomStream& rng);

// Shape checks against the context; ParameterError on mismatch.
void CheckKey(const Context& ctx, const SecretKey& sk);
void CheckKey(const Context& ctx, const PublicKey& pk);
void CheckKey(const Context& ctx, const EvalKeys& evk);

}  // namespace teefhe::she

#endif  // TEEFHE_SHE_KEYS_H_
