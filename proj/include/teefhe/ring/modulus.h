#ifndef TEEFHE_RING_MODULUS_H_
#define TEEFHE_RING_MODULUS_H_

#include <array>
#include <cstdint>

namespace teefhe {

using uint128_t = unsigned __int128;
using int128_t = __int128;

// A word-sized modulus with a precomputed Barrett ratio floor(2^128 / value).
// Values must satisfy 2 <= value < 2^62 so that sums of two residues and
// 128-bit products never overflow the reduction routines.
class Modulus {
 public:
  static constexpr int kMaxBits = 62;

  explicit Modulus(uint64_t value);

  uint64_t value() const { return value_; }
  int bit_count() const { return bit_count_; }
  const std::array<uint64_t, 2>& barrett_ratio() const { return ratio_; }

  // Reduces a 128-bit value. Branch-free.
  uint64_t Reduce(uint128_t x) const;
  uint64_t Reduce(uint64_t x) const;

  uint64_t Add(uint64_t a, uint64_t b) const;
  uint64_t Sub(uint64_t a, uint64_t b) const;
  uint64_t Negate(uint64_t a) const;
  uint64_t Mul(uint64_t a, uint64_t b) const;

  // Maps a signed value into [0, value).
  uint64_t FromSigned(int64_t v) const;
  // Centered representative in (-value/2, value/2].
  int64_t Centered(uint64_t a) const;

  bool operator==(const Modulus& other) const { return value_ == other.value_; }

 private:
  uint64_t value_;
  int bit_count_;
  std::array<uint64_t, 2> ratio_;
};

// Deterministic Miller-Rabin for 64-bit inputs.
bool IsPrime(uint64_t value);

// Largest prime p < 2^bits with p = 1 (mod congruence). Throws ParameterError
// if none exists above 2^(bits-1).
uint64_t LargestPrimeBelowPowerOfTwo(int bits, uint64_t congruence);

// Modular inverse via the extended Euclidean algorithm. Public inputs only.
uint64_t InverseMod(uint64_t value, uint64_t modulus);

}  // namespace teefhe

#endif  // TEEFHE_RING_MODULUS_H_
