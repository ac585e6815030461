#ifndef TEEFHE_SHE_CONTEXT_H_
#define TEEFHE_SHE_CONTEXT_H_

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "teefhe/ring/modulus.h"
#include "teefhe/ring/ntt.h"
#include "teefhe/ring/poly.h"
#include "teefhe/she/params.h"

namespace teefhe::she {

// Validated parameters plus every table derived from them. Immutable and
// shareable across threads.
class Context {
 public:
  // Validates `params` (ParameterError on failure) and builds the tables.
  static std::shared_ptr<const Context> Create(const EncryptionParams& params);

  // Number of contexts constructed in this process so far.
  static uint64_t BuildCount();

  const EncryptionParams& params() const { return params_; }
  std::size_t n() const { return params_.n; }
  const Modulus& q() const { return q_; }
  const Modulus& t() const { return t_; }
  uint64_t delta() const { return delta_; }
  // 64-bit digest of the serialized parameters.
  uint64_t params_id() const { return params_id_; }
  const NttTables& ntt() const { return *ntt_; }

  // Negacyclic product over q through the NTT.
  Poly Multiply(const Poly& a, const Poly& b) const;
  // Same product with every butterfly and pointwise step recorded.
  Poly MultiplyTraced(const Poly& a, const Poly& b) const;

  // round(t * v / q) mod t for a canonical residue v, branch-free.
  uint64_t ScaleDownRound(uint64_t v) const;

  // Exact integer tensor product of two centered operands: entry k of the
  // result is round(t/q * sum_{i+j=k} a_i * b_j) mod q, where the sums run
  // over the integers.
  std::array<Poly, 3> TensorScaled(const Poly& a0, const Poly& a1,
                                   const Poly& b0, const Poly& b1) const;

  const std::vector<Modulus>& aux_moduli() const { return aux_; }

 private:
  explicit Context(const EncryptionParams& params);

  EncryptionParams params_;
  Modulus q_;
  Modulus t_;
  uint64_t delta_;
  uint64_t params_id_;
  // q^-1 mod 2^64 for exact division.
  uint64_t q_inv_word_;
  uint64_t half_q_;
  std::shared_ptr<const NttTables> ntt_;
  std::vector<Modulus> aux_;
  std::vector<std::shared_ptr<const NttTables>> aux_ntt_;
};

using ContextPtr = std::shared_ptr<const Context>;

}  // namespace teefhe::she

#endif  // TEEFHE_SHE_CONTEXT_H_
