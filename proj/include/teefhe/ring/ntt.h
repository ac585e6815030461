#ifndef TEEFHE_RING_NTT_H_
#define TEEFHE_RING_NTT_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "teefhe/ring/modulus.h"

namespace teefhe {

// Precomputed twiddle factors for the negacyclic NTT over Z_q[x]/(x^n + 1).
// The root is pinned deterministically: the smallest primitive 2n-th root of
// unity modulo q.
class NttTables {
 public:
  NttTables(std::size_t n, const Modulus& modulus);

  // Shared, process-wide cache keyed by (n, q).
  static std::shared_ptr<const NttTables> Get(std::size_t n,
                                              const Modulus& modulus);
  static bool Supports(std::size_t n, uint64_t q);

  std::size_t n() const { return n_; }
  const Modulus& modulus() const { return modulus_; }
  uint64_t root() const { return root_; }

  // In-place transforms. Outputs are canonical residues in [0, q). Control
  // flow and memory accesses depend only on n.
  void Forward(std::span<uint64_t> values) const;
  void Inverse(std::span<uint64_t> values) const;

  // Identical arithmetic, reporting every butterfly to the trace recorder.
  void ForwardTraced(std::span<uint64_t> values) const;
  void InverseTraced(std::span<uint64_t> values) const;

 private:
  template <bool kTraced>
  void ForwardImpl(std::span<uint64_t> values) const;
  template <bool kTraced>
  void InverseImpl(std::span<uint64_t> values) const;

  std::size_t n_;
  int log_n_;
  Modulus modulus_;
  uint64_t root_;
  std::vector<uint64_t> root_powers_;          // psi^bitrev(i)
  std::vector<uint64_t> root_powers_shoup_;
  std::vector<uint64_t> inv_root_powers_;      // psi^-bitrev(i)
  std::vector<uint64_t> inv_root_powers_shoup_;
  uint64_t inv_n_;
  uint64_t inv_n_shoup_;
};

// Shoup precomputation floor(w * 2^64 / q).
uint64_t ShoupPrecompute(uint64_t w, uint64_t q);

// x * w mod q using the Shoup constant for w. Branch-free.
inline uint64_t MulShoup(uint64_t x, uint64_t w, uint64_t w_shoup,
                         uint64_t q) {
  const uint64_t hi = static_cast<uint64_t>((uint128_t{x} * w_shoup) >> 64);
  const uint64_t r = x * w - hi * q;
  return r - (q & (0 - static_cast<uint64_t>(r >= q)));
}

}  // namespace teefhe

#endif  // TEEFHE_RING_NTT_H_
