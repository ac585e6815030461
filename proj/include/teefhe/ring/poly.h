#ifndef TEEFHE_RING_POLY_H_
#define TEEFHE_RING_POLY_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "teefhe/ring/modulus.h"

namespace teefhe {

// Element of Z_q[x]/(x^n + 1) in canonical coefficient form: n is a power of
// two and every coefficient lies in [0, q).
class Poly {
 public:
  Poly(std::size_t n, const Modulus& modulus);

  // Validates length and coefficient range.
  static Poly FromCoefficients(std::vector<uint64_t> coeffs,
                               const Modulus& modulus);

  std::size_t n() const { return coeffs_.size(); }
  const Modulus& modulus() const { return modulus_; }

  uint64_t operator[](std::size_t i) const { return coeffs_[i]; }
  uint64_t& operator[](std::size_t i) { return coeffs_[i]; }

  std::span<const uint64_t> coeffs() const { return coeffs_; }
  std::span<uint64_t> mutable_coeffs() { return coeffs_; }

  bool IsZero() const;
  // Max |c| over centered representatives.
  uint64_t InfinityNorm() const;

  bool operator==(const Poly& other) const = default;

 private:
  Poly(std::vector<uint64_t> coeffs, const Modulus& modulus)
      : coeffs_(std::move(coeffs)), modulus_(modulus) {}

  std::vector<uint64_t> coeffs_;
  Modulus modulus_;
};

enum class MulAlgorithm { kAuto, kNtt, kSchoolbook };

bool IsPowerOfTwo(std::size_t n);

Poly PolyAddMod(const Poly& a, const Poly& b);
Poly PolySubMod(const Poly& a, const Poly& b);
Poly PolyNegateMod(const Poly& a);
Poly PolyScalarMulMod(const Poly& a, uint64_t scalar);

// a * b in Z_q[x]/(x^n + 1). kAuto uses the NTT whenever q = 1 (mod 2n) and
// falls back to the schoolbook product otherwise; kNtt throws
// ConfigurationError for an incompatible modulus.
Poly PolyNegacyclicMulMod(const Poly& a, const Poly& b,
                          MulAlgorithm algorithm = MulAlgorithm::kAuto);

}  // namespace teefhe

#endif  // TEEFHE_RING_POLY_H_
