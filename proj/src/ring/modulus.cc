#include "teefhe/ring/modulus.h"

#include <bit>
#include <string>

#include "teefhe/errors.h"

namespace teefhe {

namespace {

inline uint64_t MaskIf(bool condition) {
  return 0 - static_cast<uint64_t>(condition);
}

uint64_t PowMod(uint64_t base, uint64_t exponent, uint64_t modulus) {
  uint128_t result = 1;
  uint128_t b = base % modulus;
  while (exponent != 0) {
    if (exponent & 1) result = (result * b) % modulus;
    b = (b * b) % modulus;
    exponent >>= 1;
  }
  return static_cast<uint64_t>(result);
}

}  // namespace

Modulus::Modulus(uint64_t value) : value_(value) {
  if (value < 2 || value >= (uint64_t{1} << kMaxBits)) {
    throw ParameterError("modulus must satisfy 2 <= value < 2^62, got " +
                         std::to_string(value));
  }
  bit_count_ = 64 - std::countl_zero(value);
  const uint128_t all_ones = ~uint128_t{0};
  uint128_t ratio = all_ones / value;
  if (all_ones % value == value - 1) ++ratio;
  ratio_ = {static_cast<uint64_t>(ratio), static_cast<uint64_t>(ratio >> 64)};
}

uint64_t Modulus::Reduce(uint128_t x) const {
  const uint64_t lo = static_cast<uint64_t>(x);
  const uint64_t hi = static_cast<uint64_t>(x >> 64);
  // Round 1: lo * ratio.
  const uint64_t carry =
      static_cast<uint64_t>((uint128_t{lo} * ratio_[0]) >> 64);
  uint128_t t2 = uint128_t{lo} * ratio_[1];
  uint128_t sum = static_cast<uint128_t>(static_cast<uint64_t>(t2)) + carry;
  uint64_t tmp1 = static_cast<uint64_t>(sum);
  const uint64_t tmp3 =
      static_cast<uint64_t>(t2 >> 64) + static_cast<uint64_t>(sum >> 64);
  // Round 2: hi * ratio.
  t2 = uint128_t{hi} * ratio_[0];
  sum = static_cast<uint128_t>(tmp1) + static_cast<uint64_t>(t2);
  const uint64_t carry2 =
      static_cast<uint64_t>(t2 >> 64) + static_cast<uint64_t>(sum >> 64);
  const uint64_t quotient = hi * ratio_[1] + tmp3 + carry2;
  const uint64_t r = lo - quotient * value_;
  return r - (value_ & MaskIf(r >= value_));
}

uint64_t Modulus::Reduce(uint64_t x) const { return Reduce(uint128_t{x}); }

uint64_t Modulus::Add(uint64_t a, uint64_t b) const {
  const uint64_t s = a + b;
  return s - (value_ & MaskIf(s >= value_));
}

uint64_t Modulus::Sub(uint64_t a, uint64_t b) const {
  const uint64_t d = a - b;
  return d + (value_ & MaskIf(a < b));
}

uint64_t Modulus::Negate(uint64_t a) const {
  return (value_ - a) & MaskIf(a != 0);
}

uint64_t Modulus::Mul(uint64_t a, uint64_t b) const {
  return Reduce(uint128_t{a} * b);
}

uint64_t Modulus::FromSigned(int64_t v) const {
  const int64_t r = v % static_cast<int64_t>(value_);
  return static_cast<uint64_t>(r) + (value_ & MaskIf(r < 0));
}

int64_t Modulus::Centered(uint64_t a) const {
  const uint64_t wrap = value_ & MaskIf(a > value_ / 2);
  return static_cast<int64_t>(a) - static_cast<int64_t>(wrap);
}

bool IsPrime(uint64_t value) {
  if (value < 2) return false;
  for (uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (value % p == 0) return value == p;
  }
  uint64_t d = value - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    uint64_t x = PowMod(a, d, value);
    if (x == 1 || x == value - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = static_cast<uint64_t>((uint128_t{x} * x) % value);
      if (x == value - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

uint64_t LargestPrimeBelowPowerOfTwo(int bits, uint64_t congruence) {
  if (bits < 2 || bits > Modulus::kMaxBits || congruence == 0) {
    throw ParameterError("unsupported prime search request");
  }
  const uint64_t top = uint64_t{1} << bits;
  const uint64_t floor = uint64_t{1} << (bits - 1);
  // Largest candidate of the form k * congruence + 1 below 2^bits.
  uint64_t candidate = ((top - 2) / congruence) * congruence + 1;
  while (candidate > floor) {
    if (IsPrime(candidate)) return candidate;
    if (candidate <= congruence) break;
    candidate -= congruence;
  }
  throw ParameterError("no prime = 1 mod " + std::to_string(congruence) +
                       " with " + std::to_string(bits) + " bits");
}

uint64_t InverseMod(uint64_t value, uint64_t modulus) {
  int128_t t = 0, new_t = 1;
  int128_t r = modulus, new_r = value % modulus;
  while (new_r != 0) {
    const int128_t q = r / new_r;
    const int128_t tmp_t = t - q * new_t;
    t = new_t;
    new_t = tmp_t;
    const int128_t tmp_r = r - q * new_r;
    r = new_r;
    new_r = tmp_r;
  }
  if (r != 1) throw ParameterError("value is not invertible");
  if (t < 0) t += modulus;
  return static_cast<uint64_t>(t);
}

}  // namespace teefhe
